"""Sparse statevectors over computational-basis bit strings.

States here are real-amplitude superpositions of a handful of basis strings,
stored as a map from BitString to amplitude.  All protocol states have at
most a few dozen branches, so nothing ever materializes a dense 2^n vector;
the one exception is the generic Hadamard-basis sampler, which enumerates
outcomes and is capped at DENSE_ENUM_MAX_BITS.

Measurement routines draw from a caller-supplied random.Random so every
sampling decision is reproducible from a seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Iterable

from .bits import BitString
from .errors import CapacityError, InvalidInputError

# Tolerance for the sum of squared amplitudes.
NORM_TOL = 1e-9
# Tolerance when comparing individual amplitudes.
AMP_TOL = 1e-12
# hadamard_measure enumerates all 2^n outcomes for states with more than two
# branches; refuse beyond this width.
DENSE_ENUM_MAX_BITS = 20


@dataclass(frozen=True)
class SparseState:
    """Normalized sparse state.  Terms are kept sorted by basis string."""

    bit_len: int
    terms: dict[BitString, float]

    def __post_init__(self) -> None:
        if self.bit_len < 1:
            raise InvalidInputError(f"bit_len must be >= 1, got {self.bit_len}")
        if not self.terms:
            raise InvalidInputError("state needs at least one term")
        norm_sq = 0.0
        for key, amp in self.terms.items():
            if key.bit_len != self.bit_len:
                raise InvalidInputError(
                    f"term {key} has width {key.bit_len}, state has {self.bit_len}"
                )
            if amp == 0.0:
                raise InvalidInputError(f"term {key} has zero amplitude")
            norm_sq += amp * amp
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvalidInputError(
                f"squared amplitudes sum to {norm_sq!r}, expected 1"
            )
        # Canonical iteration order regardless of how the dict was built.
        ordered = dict(sorted(self.terms.items()))
        object.__setattr__(self, "terms", ordered)

    @property
    def num_branches(self) -> int:
        return len(self.terms)

    @property
    def branches(self) -> tuple[BitString, ...]:
        return tuple(self.terms)

    def amplitude(self, key: BitString) -> float:
        return self.terms.get(key, 0.0)

    def isclose(self, other: SparseState, tol: float = AMP_TOL) -> bool:
        """True when both states carry the same terms within tol."""
        if self.bit_len != other.bit_len:
            return False
        keys = self.terms.keys() | other.terms.keys()
        return all(
            abs(self.amplitude(k) - other.amplitude(k)) <= tol for k in keys
        )


def singleton(key: BitString) -> SparseState:
    """The basis state |key> with amplitude 1."""
    return SparseState(key.bit_len, {key: 1.0})


def uniform_superposition(strings: Iterable[BitString]) -> SparseState:
    """Equal-amplitude superposition of the given distinct basis strings."""
    keys = list(strings)
    if not keys:
        raise InvalidInputError("need at least one basis string")
    width = keys[0].bit_len
    if any(k.bit_len != width for k in keys):
        raise InvalidInputError("all basis strings must share one width")
    if len(set(keys)) != len(keys):
        raise InvalidInputError("basis strings must be distinct")
    amp = 1.0 / math.sqrt(len(keys))
    return SparseState(width, {k: amp for k in keys})


def inner_product(a: SparseState, b: SparseState) -> float:
    if a.bit_len != b.bit_len:
        raise InvalidInputError(
            f"width mismatch: {a.bit_len} vs {b.bit_len}"
        )
    if len(b.terms) < len(a.terms):
        a, b = b, a
    return sum(amp * b.terms.get(key, 0.0) for key, amp in a.terms.items())


def trace_distance_pure(a: SparseState, b: SparseState) -> float:
    """Trace distance between two pure states: sqrt(1 - <a|b>^2)."""
    overlap = inner_product(a, b)
    return math.sqrt(max(0.0, 1.0 - overlap * overlap))


def helstrom_success_probability(a: SparseState, b: SparseState) -> float:
    """Best achievable probability of telling a from b at equal priors."""
    return 0.5 + 0.5 * trace_distance_pure(a, b)


def measure_computational(
    state: SparseState, rng: Random
) -> tuple[BitString, SparseState]:
    """Projective measurement in the computational basis.

    Returns the sampled string together with the post-measurement state,
    which is the matching basis state.  The input is not mutated.
    """
    r = rng.random()
    acc = 0.0
    outcome = None
    for key, amp in state.terms.items():
        acc += amp * amp
        if r < acc:
            outcome = key
            break
    if outcome is None:
        # r landed in the normalization slack; take the last term.
        outcome = next(reversed(state.terms))
    return outcome, singleton(outcome)


def hadamard_measure(state: SparseState, rng: Random) -> BitString:
    """Measure every qubit in the Hadamard basis; return the outcome string.

    The outcome d appears with probability proportional to
    (sum_j amp_j * (-1)^(d.x_j))^2 over the state's terms x_j.

    Single-branch states give a uniform d.  Two-branch states are sampled in
    O(1): a uniform draw is folded onto the support {d : d.(x1 xor x2) = 0}
    by flipping the lowest set bit of x1 xor x2 when the parity is odd.  Any
    other branch count falls back to enumerating all 2^n outcomes, which is
    refused above DENSE_ENUM_MAX_BITS.
    """
    n = state.bit_len
    keys = state.branches
    if len(keys) == 1:
        return BitString(n, rng.getrandbits(n))
    if len(keys) == 2:
        diff = keys[0].value ^ keys[1].value
        d = rng.getrandbits(n)
        if (d & diff).bit_count() & 1:
            d ^= diff & -diff
        return BitString(n, d)
    if n > DENSE_ENUM_MAX_BITS:
        raise CapacityError(
            f"dense outcome enumeration needs bit_len <= {DENSE_ENUM_MAX_BITS}, "
            f"got {n}"
        )
    pairs = [(k.value, amp) for k, amp in state.terms.items()]
    weights = []
    total = 0.0
    for d in range(1 << n):
        acc = 0.0
        for value, amp in pairs:
            if (d & value).bit_count() & 1:
                acc -= amp
            else:
                acc += amp
        w = acc * acc
        total += w
        weights.append(w)
    r = rng.random() * total
    acc = 0.0
    for d, w in enumerate(weights):
        acc += w
        if r < acc:
            return BitString(n, d)
    return BitString(n, (1 << n) - 1)


def helstrom_discriminate(
    truth: SparseState, h0: SparseState, h1: SparseState, rng: Random
) -> int:
    """Optimal two-outcome measurement for pure h0 vs pure h1 at equal priors.

    Applies the Helstrom measurement to ``truth`` and returns 0 or 1, the
    index of the hypothesis the measurement reports.  When truth is drawn
    uniformly from {h0, h1} the answer is correct with probability
    1/2 + 1/2 * trace_distance_pure(h0, h1).

    The measurement acts in the two-dimensional span of the hypotheses;
    any component of truth outside that span is resolved by a fair coin,
    as is the degenerate case where h0 and h1 differ only by a global sign.
    """
    if not (truth.bit_len == h0.bit_len == h1.bit_len):
        raise InvalidInputError("all three states must share one width")
    if h0.isclose(h1):
        raise InvalidInputError("hypotheses are identical; nothing to discriminate")

    overlap = max(-1.0, min(1.0, inner_product(h0, h1)))
    sin_sq = 1.0 - overlap * overlap
    if sin_sq <= 1e-18:
        # Same ray up to sign: zero trace distance, the coin is optimal.
        return 0 if rng.random() < 0.5 else 1
    sin = math.sqrt(sin_sq)

    # Orthonormal frame for the span: e1 = h0, e2 = (h1 - overlap*h0)/sin.
    t_e1 = inner_product(truth, h0)
    t_e2 = (inner_product(truth, h1) - overlap * t_e1) / sin

    # Positive eigenvector of (|h0><h0| - |h1><h1|)/2 in the (e1, e2) frame.
    scale = math.sqrt(2.0 * (1.0 + sin))
    v1 = (1.0 + sin) / scale
    v2 = -overlap / scale

    along = t_e1 * v1 + t_e2 * v2
    outside = max(0.0, 1.0 - t_e1 * t_e1 - t_e2 * t_e2)
    p_report_h0 = min(1.0, along * along + 0.5 * outside)
    return 0 if rng.random() < p_report_h0 else 1
