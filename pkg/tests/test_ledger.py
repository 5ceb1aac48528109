from __future__ import annotations

import pytest

from ellbound import shipped_ledger
from ellbound.errors import DomainError, MissingKey, NonPositiveValue
from ellbound.ledger import IMPLICIT_KEYS, NAMED_KEYS, ConstantsLedger, load_ledger


def test_ones_roundtrip(ones_ledger_file):
    L = load_ledger(ones_ledger_file)
    assert L == ConstantsLedger.ones()
    assert L.hash == ConstantsLedger.ones().hash
    assert len(L.hash) == 64


def test_missing_key(tmp_path):
    path = tmp_path / "l.toml"
    path.write_text("".join(f"{k} = 1.0\n" for k in NAMED_KEYS if k != "kappa4"))
    with pytest.raises(MissingKey) as exc:
        load_ledger(path)
    assert "kappa4" in str(exc.value)


def test_implicit_slots_default_to_one(tmp_path):
    path = tmp_path / "l.toml"
    path.write_text("".join(f"{k} = 2.0\n" for k in NAMED_KEYS).replace("kappa4 = 2.0", "kappa4 = 0.5"))
    L = load_ledger(path)
    assert all(getattr(L, k) == 1.0 for k in IMPLICIT_KEYS)
    assert L.gamma2 == 2.0


def test_bad_values(tmp_path):
    path = tmp_path / "l.toml"
    text = ConstantsLedger.ones().to_toml()
    path.write_text(text.replace("kappa4 = 1.0", "kappa4 = -1.0"))
    with pytest.raises(NonPositiveValue):
        load_ledger(path)
    path.write_text(text.replace("gamma0 = 1.0", "gamma0 = 0"))
    with pytest.raises(NonPositiveValue):
        load_ledger(path)
    path.write_text(text + "mystery = 1.0\n")
    with pytest.raises(DomainError):
        load_ledger(path)
    with pytest.raises(DomainError):
        ConstantsLedger(kappa4=2.0)


def test_env_fallback(monkeypatch, ones_ledger_file):
    monkeypatch.setenv("ELLBOUND_LEDGER", ones_ledger_file)
    assert load_ledger().hash == ConstantsLedger.ones().hash
    monkeypatch.delenv("ELLBOUND_LEDGER")
    assert load_ledger() == ConstantsLedger()


def test_hash_tracks_values():
    a = ConstantsLedger.ones()
    b = a.with_values(gamma2=2.0)
    assert a.hash != b.hash
    assert b.with_values(gamma2=1.0).hash == a.hash


def test_shipped_files():
    assert load_ledger(shipped_ledger("ones")) == ConstantsLedger.ones()
    assert load_ledger(shipped_ledger("default")) == ConstantsLedger()
