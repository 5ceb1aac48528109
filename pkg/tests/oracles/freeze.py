"""Regenerate frozen.json from the oracles (run once; the tests read the file).

    python3 tests/oracles/freeze.py
"""
from __future__ import annotations

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from oracles import arith_oracle as A  # noqa: E402
from oracles import bounds_oracle as O  # noqa: E402


def main():
    e = math.e
    s = 1 + math.sqrt(3)
    frozen = {
        "nt_height_3_5_n10": A.doubling_height(3, 5, 0, 10),
        "thm1_logC_r1_d2_all_e": float(O.log_C_EK(1, 2, e, [e], e, 1)),
        "rank_d1": float(O.rank_bound(1, 0, 0)),
        "rank_d1_logN1": float(O.rank_bound(1, 1, 0)),
        "rank_d2": float(O.rank_bound(2, 0, 0)),
        "prop310_block_d1": float(O.mp.mpf(s) ** 8 / O.mpmath.log(s)),
        "prop310_logC_d1": float(O.log_C_d(1)),
        "thm34_d4_example": float(O.log_thm34(4, 12.377, 1.7918, 1, 1)),
        "thm42_d1_rad1": float(O.thm42(1, 0, 1, 1, 1)[0]),
    }
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "frozen.json")
    with open(path, "w") as fh:
        json.dump(frozen, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(frozen, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
