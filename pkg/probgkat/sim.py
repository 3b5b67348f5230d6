from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from probgkat.prob import Accept, Dist, Outcome, Reject, Ret, Step
from probgkat.semantics.derivative import derivative
from probgkat.syntax.ast import Expr
from probgkat.syntax.atoms import Alphabet, Atom, enumerate_atoms
from probgkat.utils.config import settings
from probgkat.utils.logger import logger

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


# ---- atom policies ---------------------------------------------------------


@dataclass(frozen=True)
class Fixed:
    atom: Atom


@dataclass(frozen=True)
class UniformRandom:
    pass


@dataclass(frozen=True)
class Cyclic:
    atoms: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("cyclic atom policy needs at least one atom")


AtomPolicy = Union[Fixed, UniformRandom, Cyclic]


def parse_policy(text: str, alphabet: Alphabet) -> AtomPolicy:
    """fixed:<atom> | uniform | cycle:<a1;a2;...>, atoms as comma-sets of true tests."""
    kind, _, arg = text.partition(":")
    if kind == "uniform" and not arg:
        return UniformRandom()
    if kind == "fixed":
        return Fixed(alphabet.parse_atom(arg))
    if kind == "cycle":
        return Cyclic(tuple(alphabet.parse_atom(a) for a in arg.split(";")))
    raise ValueError(f"unknown atom policy {text!r}")


# ---- terminals -------------------------------------------------------------


@dataclass(frozen=True)
class Accepted:
    def __str__(self) -> str:
        return "accept"


@dataclass(frozen=True)
class Rejected:
    def __str__(self) -> str:
        return "reject"


@dataclass(frozen=True)
class Returned:
    name: str

    def __str__(self) -> str:
        return f"ret {self.name}"


@dataclass(frozen=True)
class Timeout:
    def __str__(self) -> str:
        return "timeout"


Terminal = Union[Accepted, Rejected, Returned, Timeout]


@dataclass(frozen=True)
class RunResult:
    terminal: Terminal
    trace: Tuple[Tuple[Atom, str], ...] = ()


# ---- sampling --------------------------------------------------------------


def derive_seed(seed: int, index: int) -> int:
    """splitmix64 finalizer over seed advanced by index golden-gamma increments."""
    z = (seed + (index + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Sampler:
    def __init__(self, seed: int):
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def raw(self) -> int:
        return int(self.rng.integers(0, MASK64, dtype=np.uint64, endpoint=True))

    def index(self, n: int) -> int:
        return int(self.rng.integers(0, n))

    def choose(self, nu: Dist) -> Outcome:
        # u = k / 2^64 falls below the cumulative threshold num/den iff k * den < num * 2^64
        k = self.raw()
        total = Fraction(0)
        outcome = None
        for outcome, p in nu.items():
            total += p
            if k * total.denominator < total.numerator << 64:
                return outcome
        return outcome  # type: ignore[return-value]


def _pick_atom(policy: AtomPolicy, atoms: Sequence[Atom], step: int, sampler: Sampler) -> Atom:
    if isinstance(policy, Fixed):
        return policy.atom
    if isinstance(policy, Cyclic):
        return policy.atoms[step % len(policy.atoms)]
    return atoms[sampler.index(len(atoms))]


def run_once(
    e: Expr,
    alphabet: Alphabet,
    policy: AtomPolicy,
    seed: int,
    max_steps: Optional[int] = None,
) -> RunResult:
    max_steps = settings.max_steps if max_steps is None else max_steps
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    atoms = enumerate_atoms(alphabet)
    sampler = Sampler(seed)
    trace: List[Tuple[Atom, str]] = []
    state = e
    for step in range(max_steps):
        atom = _pick_atom(policy, atoms, step, sampler)
        outcome = sampler.choose(derivative(state, atom))
        if isinstance(outcome, Accept):
            return RunResult(Accepted(), tuple(trace))
        if isinstance(outcome, Reject):
            return RunResult(Rejected(), tuple(trace))
        if isinstance(outcome, Ret):
            return RunResult(Returned(outcome.name), tuple(trace))
        assert isinstance(outcome, Step)
        trace.append((atom, outcome.action))
        state = outcome.target
    return RunResult(Timeout(), tuple(trace))


def estimate(
    e: Expr,
    alphabet: Alphabet,
    policy: AtomPolicy,
    n: int,
    seed: int,
    max_steps: Optional[int] = None,
    workers: Optional[int] = None,
) -> Dict[Terminal, Fraction]:
    """Empirical terminal frequencies over n runs; run i is seeded by derive_seed(seed, i)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    workers = settings.sim_workers if workers is None else workers

    def one(i: int) -> Terminal:
        return run_once(e, alphabet, policy, derive_seed(seed, i), max_steps).terminal

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            terminals = list(pool.map(one, range(n)))
    else:
        terminals = [one(i) for i in range(n)]
    counts: Dict[Terminal, int] = {}
    for t in terminals:
        counts[t] = counts.get(t, 0) + 1
    logger.info("Simulated runs={n} terminals={k} seed={s}", n=n, k=len(counts), s=seed)
    return {t: Fraction(c, n) for t, c in sorted(counts.items(), key=lambda kv: str(kv[0]))}


def compare_estimates(
    a: Dict[Terminal, Fraction],
    b: Dict[Terminal, Fraction],
    n: int,
    sigmas: Optional[int] = None,
) -> List[Terminal]:
    sigmas = settings.sim_tolerance_sigmas if sigmas is None else sigmas
    flagged = []
    for t in sorted(set(a) | set(b), key=str):
        pa, pb = a.get(t, Fraction(0)), b.get(t, Fraction(0))
        p = float(pa + pb) / 2
        band = sigmas * float(np.sqrt(p * (1 - p) / n))
        if abs(float(pa - pb)) > band:
            logger.warning("Estimates disagree terminal={t} a={pa} b={pb} band={band}", t=str(t), pa=float(pa), pb=float(pb), band=band)
            flagged.append(t)
    return flagged
