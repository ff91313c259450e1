"""Linear recurring sequences over Z/(p^e) and their level decomposition.

One full least period is materialized per sequence; every consumer
indexes cyclically. The recurrence is read off a monic generator
f(x) = x^n - c_{n-1} x^{n-1} - ... - c_0 as
a(i+n) = [c_{n-1} a(i+n-1) + ... + c_0 a(i)] mod p^e.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError
from .primitivity import PrimitivityCertificate, compute_h
from .polyring import (
    RingPolynomial,
    apply_poly_to_sequence,
    ward_bound,
)
from .ringcore import carry_c1


@dataclass(frozen=True)
class LRSequence:
    """A recurring sequence with one least period of terms."""

    f: RingPolynomial
    initial_state: tuple[int, ...]
    terms: tuple[int, ...]
    period: int

    def at(self, t: int) -> int:
        return self.terms[t % self.period]

    def state_at(self, t: int) -> tuple[int, ...]:
        n = self.f.degree
        return tuple(self.at(t + k) for k in range(n))


@dataclass(frozen=True)
class LevelSequence:
    """A sequence over Z/p with one least period of terms."""

    p: int
    terms: tuple[int, ...]
    period: int

    def at(self, t: int) -> int:
        return self.terms[t % self.period]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.terms)


def least_period(values) -> int:
    """Smallest cyclic period of a list known to repeat with its length."""
    values = list(values)
    length = len(values)
    for d in range(1, length + 1):
        if length % d:
            continue
        if all(values[t] == values[t % d] for t in range(d, length)):
            return d
    return length


def level_sequence(p: int, values) -> LevelSequence:
    values = list(values)
    d = least_period(values)
    return LevelSequence(p=p, terms=tuple(values[:d]), period=d)


def recurrence_coeffs(f: RingPolynomial) -> tuple[int, ...]:
    """(c_0, ..., c_{n-1}) with c_k = -f_k mod p^e."""
    m = f.ctx.modulus
    return tuple((-f.coeff(k)) % m for k in range(f.degree))


def generate(f: RingPolynomial, init) -> LRSequence:
    """Run the recurrence from an n-entry state until the state recurs.

    Requires a unit constant term so the state map is a bijection and the
    first return to the initial state is the least period.
    """
    n = f.degree
    if not f.is_monic or n < 1:
        raise InvalidInputError("generator must be monic of degree >= 1")
    if not f.unit_constant_mod_p():
        raise InvalidInputError("f(0) must be a unit mod p")
    init = tuple(v % f.ctx.modulus for v in init)
    if len(init) != n:
        raise InvalidInputError(f"initial state needs {n} entries, got {len(init)}")
    m = f.ctx.modulus
    cs = recurrence_coeffs(f)
    limit = ward_bound(f)
    terms = list(init)
    state = init
    for t in range(1, limit + 1):
        nxt = sum(c * s for c, s in zip(cs, state)) % m
        state = state[1:] + (nxt,)
        if state == init:
            period = t
            break
        terms.append(nxt)
    else:
        raise InvalidInputError(f"no state recurrence within the Ward bound for {f}")
    return LRSequence(f=f, initial_state=init, terms=tuple(terms[:period]), period=period)


def level(s: LRSequence, i: int) -> LevelSequence:
    """The i-th base-p digit stream of s, reduced to its least period."""
    ctx = s.f.ctx
    if not 0 <= i < ctx.e:
        raise InvalidInputError(f"level index must be in [0, {ctx.e}), got {i}")
    q = ctx.p**i
    return level_sequence(ctx.p, [(v // q) % ctx.p for v in s.terms])


def _check_same_generator(s: LRSequence, cert: PrimitivityCertificate) -> None:
    if s.f != cert.f:
        raise InvalidInputError("sequence was not generated by the certified f")


def is_primitive_sequence(s: LRSequence, cert: PrimitivityCertificate) -> bool:
    """True iff the mod-p reduction of s is not identically zero."""
    _check_same_generator(s, cert)
    p = s.f.ctx.p
    return any(v % p for v in s.terms)


def apply_mod_p(g: RingPolynomial, lvl: LevelSequence) -> LevelSequence:
    """Apply g to a mod-p sequence, reducing the result mod p."""
    p = lvl.p
    values = apply_poly_to_sequence(g, lvl.terms, period=lvl.period)
    return level_sequence(p, [v % p for v in values])


def alpha_sequence(s: LRSequence, cert: PrimitivityCertificate) -> LevelSequence:
    """The marker m-sequence h_f(x) applied to the level-0 stream of s."""
    _check_same_generator(s, cert)
    if not is_primitive_sequence(s, cert):
        raise InvalidInputError("alpha is only defined for primitive sequences")
    return apply_mod_p(cert.h_f, level(s, 0))


def shift_identity_check(
    s: LRSequence, cert: PrimitivityCertificate, j: int
) -> int | None:
    """First t violating the top-level shift identity, or None.

    Checks a_{e-1}(t + j*p^(e-2)*T) - a_{e-1}(t) = j*alpha(t) mod p over
    one full period; needs e >= 2.
    """
    _check_same_generator(s, cert)
    ctx = s.f.ctx
    if ctx.e < 2:
        raise InvalidInputError("the shift identity needs e >= 2")
    if j < 0:
        raise InvalidInputError("j must be nonnegative")
    p = ctx.p
    top = level(s, ctx.e - 1)
    alpha = alpha_sequence(s, cert)
    shift = j * p ** (ctx.e - 2) * cert.T
    for t in range(s.period):
        lhs = (top.at(t + shift) - top.at(t)) % p
        if lhs != j * alpha.at(t) % p:
            return t
    return None


def carry_identity_check(
    s: LRSequence, cert: PrimitivityCertificate, j: int, nested: bool = False
) -> int | None:
    """First t violating the carry expansion identity, or None.

    For e >= 3 the shift by j*p^(e-3)*T of the top level expands into the
    lower-level data: a linear term from h_f acting on level 1, the digit-1
    carry of j times h_{e-2} acting on the embedded level 0, the carry of
    the level-(e-2) increment, and (only for e = 3) a binomial(j, 2)
    second-order term. `nested` switches to the alternative reading that
    feeds the increment carry into the digit-1 extraction.
    """
    _check_same_generator(s, cert)
    ctx = s.f.ctx
    e, p, m = ctx.e, ctx.p, ctx.modulus
    if e < 3:
        raise InvalidInputError("the carry identity needs e >= 3")
    if j < 0:
        raise InvalidInputError("j must be nonnegative")
    a0 = level(s, 0)
    a1 = level(s, 1)
    low = level(s, e - 2)
    top = level(s, e - 1)
    alpha = alpha_sequence(s, cert)
    hf_a1 = apply_mod_p(cert.h_f, a1)
    h_low = compute_h(s.f, e - 2)
    # h_{e-2} acts on level 0 embedded into Z/(p^e); digit 1 of j times
    # the result is what carries up.
    deep = apply_poly_to_sequence(h_low, a0.terms, period=a0.period)
    binom = 0
    hf2_a0 = None
    if e == 3:
        binom = (j * (j - 1) // 2) % p
        hf2_a0 = apply_mod_p(cert.h_f, apply_mod_p(cert.h_f, a0))
    shift = j * p ** (e - 3) * cert.T
    for t in range(s.period):
        lhs = (top.at(t + shift) - top.at(t)) % p
        inc = j * alpha.at(t) % p
        inc_carry = carry_c1(low.at(t) + inc, p)
        jdeep = j * deep[t % a0.period] % m
        if nested:
            rhs = j * hf_a1.at(t) + carry_c1(jdeep + inc_carry, p)
        else:
            rhs = j * hf_a1.at(t) + carry_c1(jdeep, p) + inc_carry
        if e == 3:
            rhs += binom * hf2_a0.at(t)
        if lhs != rhs % p:
            return t
    return None


def verify_recurring_identities(
    s: LRSequence, cert: PrimitivityCertificate, j: int
) -> bool:
    """True iff every identity applicable at this e holds at all t."""
    if shift_identity_check(s, cert, j) is not None:
        return False
    if s.f.ctx.e >= 3 and carry_identity_check(s, cert, j) is not None:
        return False
    return True


def dump_rows(
    s: LRSequence,
    alpha: LevelSequence | None = None,
    phi: LevelSequence | None = None,
):
    """Rows for the CSV dump: t, a(t), the digits, then optional columns."""
    e = s.f.ctx.e
    header = ["t", "a"] + [f"a{i}" for i in range(e)]
    if alpha is not None:
        header.append("alpha")
    if phi is not None:
        header.append("phi")
    yield header
    levels = [level(s, i) for i in range(e)]
    for t in range(s.period):
        row = [t, s.at(t)] + [lvl.at(t) for lvl in levels]
        if alpha is not None:
            row.append(alpha.at(t))
        if phi is not None:
            row.append(phi.at(t))
        yield row
