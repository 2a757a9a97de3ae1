import json

import pytest

from kvcert.carlitz import i_of
from kvcert.fields import field_of_order
from kvcert.polyring import enumerate_monic, is_irreducible, parse_poly
from kvcert.vandiver import (
    SKIPPED,
    VACUOUS,
    Certificate,
    HypothesisError,
    check_kv,
    check_kv_char2,
    check_kv_odd,
    normalize_index,
    verify,
    verify_report,
)

CUBIC_JSON = (
    '{"q":3,"p":3,"s":1,"field_modulus":null,"P":"T^3+2*T^2+1","d":3,"n":"13","m":1,"i_P":2,'
    '"beta_divisible":true,"gamma_divisible":true,"l4_divisible":null,'
    '"Q":"T^9+2*T^6+2*T^4+2*T^3+2*T^2+1","N":"9841","modulus":"19682","index":"9840",'
    '"theorem":"4.1","verdict":"counterexample"}'
)


def test_normalize_index():
    assert normalize_index(9841, 19682) == 9840
    assert normalize_index(0, 7) == 6
    assert normalize_index(349525, 1048575) == 699049
    with pytest.raises(ValueError):
        normalize_index(3, 1)


def test_odd_worked_example(F3, P3):
    cert = check_kv_odd(P3, 13)
    assert cert.to_json() == CUBIC_JSON
    assert cert.is_counterexample
    assert parse_poly(cert.Q, F3) == parse_poly("T^9-T^6-T^4-T^3-T^2+1", F3)
    assert verify(cert)


def test_odd_failed_hypothesis(P3):
    cert = check_kv(P3, 1)
    assert cert.verdict == "hypotheses-not-satisfied"
    assert cert.gamma_divisible is False
    assert verify(cert)


def test_odd_skipped_condition(F3):
    # (q-1) | n skips the beta condition; the verdict rests on gamma alone
    P = parse_poly("T^3-T^2+1", F3)
    cert = check_kv(P, 2)
    assert cert.beta_divisible == SKIPPED
    assert cert.is_counterexample == cert.gamma_divisible


def test_char2_worked_example(F4, P4):
    cert = check_kv_char2(P4, 341)
    assert cert.i_P == 1
    assert cert.l4_divisible is True and cert.gamma_divisible is True
    assert cert.beta_divisible is None
    assert cert.N == 349525 and cert.modulus == 4**10 - 1 and cert.index == 699049
    assert cert.theorem == "5.2" and cert.is_counterexample
    Q = parse_poly(cert.Q, F4)
    assert Q.degree == 10 and is_irreducible(Q)
    assert cert.m == 1
    assert verify_report(cert) == {}


def test_char2_skip_and_vacuous(F4, P4):
    assert check_kv(P4, 3).l4_divisible == SKIPPED
    F2 = field_of_order(2)
    P = parse_poly("T^3+T^2+1", F2)
    assert i_of(P) == 1
    cert = check_kv(P, 5)
    assert cert.l4_divisible == VACUOUS
    assert cert.is_counterexample == cert.gamma_divisible


def test_malformed_inputs(F3, F4, P3):
    with pytest.raises(HypothesisError):
        check_kv(parse_poly("T", F3), 13)  # i(P) = 0
    with pytest.raises(HypothesisError):
        check_kv(parse_poly("T^2", F3), 13)
    with pytest.raises(HypothesisError):
        check_kv(P3, 0)
    with pytest.raises(HypothesisError):
        check_kv_odd(parse_poly("T^2+T+a", F4), 1)
    with pytest.raises(HypothesisError):
        check_kv_char2(P3, 13)


def test_json_round_trip_and_big_ints(P3):
    cert = check_kv(P3, 3**40 + 1)
    data = json.loads(cert.to_json())
    assert isinstance(data["n"], str) and isinstance(data["N"], str)
    back = Certificate.from_json(cert.to_json())
    assert back == cert
    with pytest.raises(ValueError):
        Certificate.from_dict({"q": 3})


def test_verify_detects_tampering(P3):
    cert = check_kv(P3, 13)
    bad = Certificate.from_dict({**cert.to_dict(), "index": "9841"})
    assert "index" in verify_report(bad) and "index_congruence" in verify_report(bad)
    bad = Certificate.from_dict({**cert.to_dict(), "gamma_divisible": False})
    assert set(verify_report(bad)) == {"gamma_divisible"}
    # P and Q compare semantically, not textually
    alt = Certificate.from_dict({**cert.to_dict(), "P": "T^3-T^2+1"})
    assert verify(alt)


@pytest.mark.parametrize("q,d", [(3, 2), (3, 3), (5, 2), (4, 2), (9, 1)])
def test_certificate_invariants(q, d):
    F = field_of_order(q)
    for P in enumerate_monic(F, d):
        if not is_irreducible(P) or i_of(P) == 0:
            continue
        for n in range(1, 12):
            if n % (q**d - 1) == 0:
                continue
            cert = check_kv(P, n)
            assert cert.N * (q**d - 1) == n * cert.modulus
            assert 0 <= cert.index < cert.modulus
            assert (cert.index + cert.N + 1) % cert.modulus == 0
            assert parse_poly(cert.Q, F).degree == F.p * d
            # N = n(1 + q^d + ... + q^((p-1)d)) = n*p mod (q-1), and p is a unit mod q-1
            assert (cert.N % (q - 1) == 0) == (n % (q - 1) == 0)


def test_divisibility_of_N_tracks_n_not_nd():
    q, d, n = 5, 2, 2
    N = n * (q ** (5 * d) - 1) // (q**d - 1)
    assert (n * d) % (q - 1) == 0
    assert N % (q - 1) == 2
