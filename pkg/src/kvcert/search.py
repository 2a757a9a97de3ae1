"""Seeded sampling of random primes: Table 1 statistics, censuses, hunting.

Randomness
----------
All draws come from SplitMix64 (Steele, Lea and Flood 2014)::

    state += 0x9E3779B97F4A7C15            (mod 2^64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Sample ``j`` of a run at degree ``d`` owns a private stream whose initial
state is ``mix64(mix64(seed ^ mix64(d)) + j * 0x9E3779B97F4A7C15)``, so a
sample's outcome never depends on how the run is split across threads.
Uniform integers below ``b`` use rejection from the top of the 64-bit range.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, TextIO

from . import __version__
from .carlitz import CutoffPolicy, beta_gamma_mod, i_of, residue_strata
from .fields import FieldSpec
from .polyring import Poly, ResidueCtx, enumerate_monic, is_irreducible
from .vandiver import Certificate, check_kv

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MAX_DRAWS = 1_000_000
CENSUS_BUDGET = 2_000_000


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, state: int):
        self.state = state & MASK64

    def next64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` for ``1 <= bound <= 2^64``."""
        limit = ((1 << 64) // bound) * bound
        while True:
            x = self.next64()
            if x < limit:
                return x % bound


def sample_stream(seed: int, d: int, j: int) -> SplitMix64:
    key = mix64((seed & MASK64) ^ mix64(d))
    return SplitMix64(mix64((key + j * GOLDEN) & MASK64))


@dataclass
class DrawStats:
    draws: int = 0
    i_zero_rejected: int = 0


def random_monic_irreducible(
    field: FieldSpec,
    d: int,
    rng: SplitMix64,
    require_i_nonzero: bool = True,
    stats: DrawStats | None = None,
) -> Poly:
    """Rejection sampling: uniform monic of degree d until irreducible (and i != 0).

    Coefficients are drawn constant term first.  ``stats`` counts draws and
    irreducibles discarded because ``i(P) = 0``.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    stats = stats if stats is not None else DrawStats()
    for _ in range(MAX_DRAWS):
        stats.draws += 1
        coeffs = [rng.below(field.q) for _ in range(d)] + [1]
        P = Poly(field, coeffs)
        if not is_irreducible(P):
            continue
        if require_i_nonzero and i_of(P) == 0:
            stats.i_zero_rejected += 1
            continue
        return P
    raise RuntimeError(f"no suitable prime of degree {d} after {MAX_DRAWS} draws")


# -- configuration -------------------------------------------------------------------

@dataclass
class SearchConfig:
    field: FieldSpec
    d: int
    samples: int
    seed: int
    n: int | None = None
    m: int | None = None
    threads: int = 1

    def __post_init__(self):
        q = self.field.q
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        if (self.n is None) == (self.m is None):
            raise ValueError("give exactly one of n and m")
        if self.m is not None:
            if not 1 <= self.m < q - 1:
                raise ValueError(f"m must satisfy 1 <= m < q-1 = {q - 1}")
            if (self.m * self.d) % (q - 1) == 0:
                raise ValueError("q-1 must not divide m*d")
        elif self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def exponent(self) -> int:
        if self.n is not None:
            return self.n
        q = self.field.q
        return self.m * (q**self.d - 1) // (q - 1)

    def echo(self) -> dict:
        return {
            "q": self.field.q,
            "field_modulus": self.field.modulus_text(),
            "d": self.d,
            "n": str(self.exponent),
            "m": self.m,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass
class TableRow:
    d: int
    samples: int
    count_beta: int = 0
    count_gamma: int = 0
    count_both: int = 0
    count_i_zero_rejected: int = 0

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        assert self.count_both <= min(self.count_beta, self.count_gamma) <= self.samples


def _map_ordered(fn, items: Iterable, threads: int) -> Iterator:
    if threads <= 1:
        yield from map(fn, items)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, items)


# -- Table 1 ---------------------------------------------------------------------------

def table1_config(field: FieldSpec, d: int, samples: int, seed: int, threads: int = 1) -> SearchConfig:
    """The preset n = (q^d - 1)/2, i.e. m = (q-1)/2; needs odd q."""
    if field.p == 2:
        raise ValueError("the n = (q^d-1)/2 preset needs odd q")
    return SearchConfig(field, d, samples, seed, m=(field.q - 1) // 2, threads=threads)


def run_table1(config: SearchConfig) -> TableRow:
    """Counts of sampled primes (i(P) != 0) with P | beta(n), P | gamma(n), both."""
    field, d, n = config.field, config.d, config.exponent
    g_bound = CutoffPolicy.mod_p(field, n, d, weighted=True).bound
    shared = None
    if g_bound < d:
        # residues of low-degree monics do not depend on P
        shared = residue_strata(ResidueCtx(Poly.monomial(field, d)), g_bound)

    def item(j: int) -> tuple[bool, bool, int]:
        stats = DrawStats()
        P = random_monic_irreducible(field, d, sample_stream(config.seed, d, j), True, stats)
        b, g = beta_gamma_mod(n, ResidueCtx(P), shared)
        return b.is_zero(), g.is_zero(), stats.i_zero_rejected

    row = TableRow(d, config.samples)
    for b0, g0, rej in _map_ordered(item, range(config.samples), config.threads):
        row.count_beta += b0
        row.count_gamma += g0
        row.count_both += b0 and g0
        row.count_i_zero_rejected += rej
    row.check()
    return row


# -- census and hunt --------------------------------------------------------------------

@dataclass
class CensusEntry:
    P: Poly
    beta_divisible: bool
    gamma_divisible: bool


def census(field: FieldSpec, d: int, m: int, budget: int = CENSUS_BUDGET) -> list[CensusEntry]:
    """Every monic irreducible P of degree d with i(P) != 0, at n = m(q^d-1)/(q-1)."""
    if field.q**d > budget:
        raise ValueError(f"census over q^d = {field.q ** d} polynomials exceeds the budget")
    if d < 1:
        raise ValueError("degree must be >= 1")
    n = m * (field.q**d - 1) // (field.q - 1)
    out = []
    for P in enumerate_monic(field, d):
        if i_of(P) == 0 or not is_irreducible(P):
            continue
        b, g = beta_gamma_mod(n, ResidueCtx(P))
        out.append(CensusEntry(P, b.is_zero(), g.is_zero()))
    return out


def hunt(config: SearchConfig) -> Iterator[Certificate]:
    """Sample primes and yield the certificates whose verdict is counterexample."""
    field, d, n = config.field, config.d, config.exponent

    def item(j: int) -> Certificate:
        P = random_monic_irreducible(field, d, sample_stream(config.seed, d, j), True)
        return check_kv(P, n)

    for cert in _map_ordered(item, range(config.samples), config.threads):
        if cert.is_counterexample:
            yield cert


# -- JSONL -----------------------------------------------------------------------------------

def header_record(command: str, config: dict, seed: int) -> dict:
    return {
        "record": "header",
        "tool": "kvcert",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def table_row_record(row: TableRow, n: int) -> dict:
    return {"record": "table_row", "n": str(n), **asdict(row)}


def write_jsonl(fh: TextIO, records: Iterable[dict]) -> None:
    for rec in records:
        fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def read_jsonl(fh: TextIO) -> Iterator[dict | Certificate]:
    """Header and table rows come back as dicts, certificate lines as Certificates."""
    for line in fh:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        yield obj if "record" in obj else Certificate.from_dict(obj)
