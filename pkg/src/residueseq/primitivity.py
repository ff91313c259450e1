"""Primitive and strongly-primitive polynomial testing and search.

A monic f over Z/(p^e) with unit constant term is primitive when the
order of x mod f reaches p^(e-1) * (p^n - 1). For primitive f the residue
x^(p^(i-1)*T) mod f equals 1 + p^i * h_i(x) for lift polynomials h_i of
degree < n; h_1 mod p decides strong primitivity.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from .errors import CertificateError, InvalidInputError
from .ringcore import RingContext
from .polyring import (
    RingPolynomial,
    order_of_x,
    poly_powmod,
    reduce_mod_p,
    with_exponent,
    x_poly,
)

EXHAUSTIVE_LIMIT = 10**6
DEFAULT_SEARCH_BUDGET = 200_000


def _require_candidate(f: RingPolynomial) -> None:
    if not f.is_monic or f.degree < 1:
        raise InvalidInputError("expected a monic polynomial of degree >= 1")
    if not f.unit_constant_mod_p():
        raise InvalidInputError("f(0) must be a unit mod p")


def is_primitive(f: RingPolynomial) -> bool:
    """True iff the order of x mod f attains p^(e-1) * (p^n - 1)."""
    _require_candidate(f)
    ctx = f.ctx
    return order_of_x(f) == ctx.p ** (ctx.e - 1) * (ctx.p ** f.degree - 1)


def compute_h(f: RingPolynomial, i: int) -> RingPolynomial:
    """Lift polynomial h_i with x^(p^(i-1)*T) = 1 + p^i * h_i mod f.

    Returns the canonical representative with coefficients in
    [0, p^(e-i)); h_i is only determined to that precision. Raises
    CertificateError when a coefficient of the residue minus one is not
    divisible by p^i, which signals a non-primitive f.
    """
    ctx = f.ctx
    if not 1 <= i <= ctx.e:
        raise InvalidInputError(f"level index must be in [1, {ctx.e}], got {i}")
    _require_candidate(f)
    T = ctx.p ** f.degree - 1
    r = poly_powmod(x_poly(ctx), ctx.p ** (i - 1) * T, f)
    diff = [(r.coeff(k) - (1 if k == 0 else 0)) % ctx.modulus for k in range(f.degree)]
    q = ctx.p**i
    h = []
    for k, c in enumerate(diff):
        if c % q:
            raise CertificateError(
                f"coefficient {c} of x^{ctx.p ** (i - 1) * T} - 1 at degree {k} "
                f"is not divisible by {ctx.p}^{i}; {f} is not primitive"
            )
        h.append(c // q)
    return RingPolynomial(ctx, tuple(h))


def compute_h_lifted(f: RingPolynomial, i: int) -> RingPolynomial:
    """h_i read off the exponent-(e+1) lift of the same coefficient list.

    Pins h_i down modulo p^(e+1-i), one digit more than compute_h; in
    particular h_e becomes visible mod p. Consistent with compute_h
    because the lifted residue reduces correctly at every lower exponent.
    """
    return compute_h(with_exponent(f, f.ctx.e + 1), i)


def is_strongly_primitive(f: RingPolynomial) -> bool:
    """True iff f is primitive and its h_1 mod p has degree >= 1."""
    if f.ctx.e < 2:
        raise InvalidInputError(
            "strong primitivity needs e >= 2; h_1 is undetermined over Z/p"
        )
    if not is_primitive(f):
        raise InvalidInputError(f"{f} is not primitive")
    return reduce_mod_p(compute_h(f, 1)).degree >= 1


@dataclass(frozen=True)
class PrimitivityCertificate:
    """Order facts and lift polynomials for a primitive f."""

    f: RingPolynomial
    n: int
    T: int
    period: int
    h1: RingPolynomial
    h_f: RingPolynomial
    strongly_primitive: bool
    seed: int | None = None

    def h(self, i: int) -> RingPolynomial:
        """h_i on demand, canonical within f's own ring."""
        return compute_h(self.f, i)

    def h_all(self) -> list[RingPolynomial]:
        return [compute_h(self.f, i) for i in range(1, self.f.ctx.e + 1)]


def certify(f: RingPolynomial, seed: int | None = None) -> PrimitivityCertificate:
    """Build the certificate; raises InvalidInputError when f is not primitive."""
    _require_candidate(f)
    ctx = f.ctx
    n = f.degree
    T = ctx.p**n - 1
    period = order_of_x(f)
    if period != ctx.p ** (ctx.e - 1) * T:
        raise InvalidInputError(
            f"{f} is not primitive: period {period} != {ctx.p ** (ctx.e - 1) * T}"
        )
    h1 = compute_h(f, 1)
    h_f = reduce_mod_p(h1)
    strongly = ctx.e >= 2 and h_f.degree >= 1
    return PrimitivityCertificate(
        f=f, n=n, T=T, period=period, h1=h1, h_f=h_f,
        strongly_primitive=strongly, seed=seed,
    )


def iter_monic_polys(ctx: RingContext, n: int):
    """Monic degree-n polynomials with unit constant term, lexicographic
    in the coefficient tuple (c_0, ..., c_{n-1})."""
    if n < 1:
        raise InvalidInputError(f"degree must be >= 1, got {n}")
    for lower in itertools.product(range(ctx.modulus), repeat=n):
        if lower[0] % ctx.p == 0:
            continue
        yield RingPolynomial(ctx, lower + (1,))


def iter_primitive(ctx: RingContext, n: int, strongly: bool = False):
    """Exhaustive stream of (strongly) primitive degree-n polynomials."""
    target = ctx.p ** (ctx.e - 1) * (ctx.p**n - 1)
    for f in iter_monic_polys(ctx, n):
        if order_of_x(f) != target:
            continue
        if strongly and not (ctx.e >= 2 and reduce_mod_p(compute_h(f, 1)).degree >= 1):
            continue
        yield f


def find_primitive(
    ctx: RingContext,
    n: int,
    strongly: bool = False,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> PrimitivityCertificate | None:
    """First qualifying polynomial, or None when the budget runs out.

    Exhaustive lexicographic enumeration while the candidate space
    p^(e*n) stays small; seeded random sampling beyond that, with the
    seed recorded in the certificate.
    """
    if strongly and ctx.e < 2:
        raise InvalidInputError("strong primitivity needs e >= 2")
    if ctx.modulus**n <= EXHAUSTIVE_LIMIT:
        for f in iter_primitive(ctx, n, strongly):
            return certify(f)
        return None
    rng = random.Random(seed)
    for _ in range(search_budget):
        lower = [rng.randrange(ctx.modulus) for _ in range(n)]
        if lower[0] % ctx.p == 0:
            continue
        f = RingPolynomial(ctx, tuple(lower) + (1,))
        target = ctx.p ** (ctx.e - 1) * (ctx.p**n - 1)
        if order_of_x(f) != target:
            continue
        if strongly and reduce_mod_p(compute_h(f, 1)).degree < 1:
            continue
        return certify(f, seed=seed)
    return None


def certificate_to_dict(cert: PrimitivityCertificate) -> dict:
    return {
        "p": cert.f.ctx.p,
        "e": cert.f.ctx.e,
        "n": cert.n,
        "f": list(cert.f.coeffs),
        "period": cert.period,
        "h1": list(cert.h1.coeffs),
        "h_f": list(cert.h_f.coeffs),
        "strongly_primitive": cert.strongly_primitive,
        "seed": cert.seed,
    }


def certificate_to_json(cert: PrimitivityCertificate) -> str:
    return json.dumps(certificate_to_dict(cert), sort_keys=True)


def certificate_from_json(text: str) -> PrimitivityCertificate:
    data = json.loads(text)
    ctx = RingContext(data["p"], data["e"])
    cert = PrimitivityCertificate(
        f=RingPolynomial(ctx, tuple(data["f"])),
        n=data["n"],
        T=data["p"] ** data["n"] - 1,
        period=data["period"],
        h1=RingPolynomial(ctx, tuple(data["h1"])),
        h_f=RingPolynomial(RingContext(data["p"], 1), tuple(data["h_f"])),
        strongly_primitive=data["strongly_primitive"],
        seed=data["seed"],
    )
    return cert
