"""Experiment harness: uniformity predicates and exhaustive theorem checks.

Every experiment is a pure function of its parameters and seed and yields
a UniformityReport; a failing verdict always carries a replayable
witness. Elementary-check budgets guard the pair scans; when a scan
would overflow its budget the harness falls back to seeded sampling and
marks the report accordingly.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass

from .errors import InvalidInputError
from .ringcore import (
    RingContext,
    UnivariateFn,
    format_univariate,
    carry_map_poly,
    is_odd_prime,
)
from .polyring import RingPolynomial
from .primitivity import (
    PrimitivityCertificate,
    certify,
    find_primitive,
    iter_primitive,
)
from .sequences import (
    LRSequence,
    LevelSequence,
    alpha_sequence,
    carry_identity_check,
    generate,
    is_primitive_sequence,
    level,
    level_sequence,
    shift_identity_check,
)
from .compress import (
    CompressingMap,
    format_multipoly,
    from_table,
    image_set,
    is_permutation,
    psi_zW,
    psi_zw,
    value_table,
)

DEFAULT_BUDGET = 10**8

SUITE_NAMES = (
    "recurrence",
    "carry",
    "periods",
    "distribution",
    "alpha-k",
    "thm7",
    "thm8",
    "thm9",
    "legendre",
    "all",
)


# ---------------------------------------------------------------------------
# reports

@dataclass
class UniformityReport:
    """Outcome record of one experiment cell."""

    experiment: str
    params: dict
    verdict: str
    witness: dict | None
    counts: dict
    sampled: bool
    seed: int
    ms: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "params": self.params,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        out["counts"] = self.counts
        out["sampled"] = self.sampled
        out["seed"] = self.seed
        if include_timing:
            out["ms"] = self.ms
        return out


def _report(experiment, params, witness, counts, sampled, seed, started):
    return UniformityReport(
        experiment=experiment,
        params=params,
        verdict="holds" if witness is None else "fails",
        witness=witness,
        counts=counts,
        sampled=sampled,
        seed=seed,
        ms=int((time.perf_counter() - started) * 1000),
    )


def _fmt_coeffs(f: RingPolynomial) -> str:
    return ",".join(str(c) for c in f.coeffs) if f.coeffs else "0"


# ---------------------------------------------------------------------------
# Legendre symbols and quadratic-residue counting

def legendre(a: int, p: int) -> int:
    """+1 for a nonzero square mod p, -1 for a nonsquare, 0 when p | a."""
    if not is_odd_prime(p):
        raise InvalidInputError(f"p must be an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def legendre_sum(w: int, p: int) -> int:
    """Sum of (x^2 + w | p) over x in Z/p; p-1 when p | w, else -1."""
    return sum(legendre(x * x + w, p) for x in range(p))


def squares(p: int) -> set[int]:
    return {x * x % p for x in range(p)}


def intersection_count(p: int, w: int) -> int:
    """|I and (w + I)| for the square image I, by brute-force sets."""
    if w % p == 0:
        raise InvalidInputError("w must be nonzero mod p")
    sq = squares(p)
    return len(sq & {(w + v) % p for v in sq})


def intersection_count_formula(p: int, w: int) -> int:
    """Closed form (p + 1 + (w|p) + (-w|p)) / 4 for the same count."""
    if w % p == 0:
        raise InvalidInputError("w must be nonzero mod p")
    total = p + 1 + legendre(w, p) + legendre(-w, p)
    if total % 4:
        raise InvalidInputError(f"formula value {total} is not divisible by 4")
    return total // 4


def thm9_choose_w(p: int) -> int:
    """Shift w used by the thm9 count: the smallest w != 0 when p = 3 mod 4,
    else the smallest w with (w|p) = (-w|p) = -1."""
    if not is_odd_prime(p):
        raise InvalidInputError(f"p must be an odd prime, got {p}")
    if p % 4 == 3:
        return 1
    for w in range(1, p):
        if legendre(w, p) == -1 and legendre(-w, p) == -1:
            return w
    raise InvalidInputError(f"no qualifying w below {p}")


# ---------------------------------------------------------------------------
# s-uniformity

def s_uniform_witness(
    u: LevelSequence,
    v: LevelSequence,
    s: int,
    marker: LevelSequence | None = None,
    marker_value: int | None = None,
) -> int | None:
    """First position where the s-hit sets of u and v disagree, or None.

    Positions run over one common period; a marker restricts them to
    marker != 0, or to marker == marker_value when a value is given.
    """
    if marker is None and marker_value is not None:
        raise InvalidInputError("marker_value given without a marker sequence")
    periods = [u.period, v.period]
    if marker is not None:
        periods.append(marker.period)
    for t in range(math.lcm(*periods)):
        if marker is not None:
            mv = marker.at(t)
            if marker_value is None:
                if mv == 0:
                    continue
            elif mv != marker_value:
                continue
        if (u.at(t) == s) != (v.at(t) == s):
            return t
    return None


def s_uniform(
    u: LevelSequence,
    v: LevelSequence,
    s: int,
    marker: LevelSequence | None = None,
    marker_value: int | None = None,
) -> bool:
    return s_uniform_witness(u, v, s, marker, marker_value) is None


# ---------------------------------------------------------------------------
# state enumeration

def primitive_states(ctx: RingContext, n: int):
    """All initial states whose mod-p reduction is nonzero, in lex order."""
    for state in itertools.product(range(ctx.modulus), repeat=n):
        if any(v % ctx.p for v in state):
            yield state


def shift_classes(f: RingPolynomial):
    """Shift-class representatives of all primitive sequences of f.

    Returns (reps, index); index maps every primitive initial state to
    (class number, rotation offset), and the rotations of each rep
    exhaust its class. Verdicts of rotation-invariant checks carry over
    from the rep to the whole class.
    """
    n = f.degree
    reps: list[LRSequence] = []
    index: dict[tuple[int, ...], tuple[int, int]] = {}
    for state in primitive_states(f.ctx, n):
        if state in index:
            continue
        s = generate(f, state)
        ci = len(reps)
        reps.append(s)
        for t in range(s.period):
            st = s.state_at(t)
            if st not in index:
                index[st] = (ci, t)
    return reps, index


# ---------------------------------------------------------------------------
# agreement at the marker value k

def equal_at_alpha_k(
    s_a: LRSequence,
    s_b: LRSequence,
    m: CompressingMap,
    cert: PrimitivityCertificate,
    k: int,
) -> bool:
    """True iff the compressed sequences agree wherever alpha(t) = k,
    with alpha taken from s_a."""
    ctx = s_a.f.ctx
    k %= ctx.p
    if k == 0:
        raise InvalidInputError("k must be nonzero")
    if not is_primitive_sequence(s_a, cert) or not is_primitive_sequence(s_b, cert):
        raise InvalidInputError("both sequences must be primitive")
    alpha = alpha_sequence(s_a, cert)
    table = value_table(m, ctx)
    span = math.lcm(s_a.period, s_b.period, alpha.period)
    for t in range(span):
        if alpha.at(t) == k and table[s_a.at(t)] != table[s_b.at(t)]:
            return False
    return True


def verify_alpha_k_injectivity(
    cert: PrimitivityCertificate,
    m: CompressingMap,
    k: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> UniformityReport:
    """Scan ordered pairs of primitive states: agreement of the compressed
    sequences at alpha(t) = k must force equal states.

    deg g >= 2 requires a strongly primitive certificate; deg g = 1 works
    for any primitive one. A counterexample would falsify the
    implementation, not the statement it checks.
    """
    started = time.perf_counter()
    ctx = cert.f.ctx
    p = ctx.p
    k %= p
    if k == 0:
        raise InvalidInputError("k must be nonzero")
    if m.g.degree >= 2 and not cert.strongly_primitive:
        raise InvalidInputError("deg g >= 2 requires a strongly primitive polynomial")
    if m.p != p or m.e != ctx.e:
        raise InvalidInputError("compressing map does not match the ring")

    states = list(primitive_states(ctx, cert.n))
    table = value_table(m, ctx)
    compressed = []
    positions = []
    for state in states:
        seq = generate(cert.f, state)
        alpha = alpha_sequence(seq, cert)
        compressed.append([table[v] for v in seq.terms])
        positions.append([t for t in range(seq.period) if alpha.at(t) == k])

    total = len(states)
    avg = max(1, sum(len(ps) for ps in positions) // max(1, total))
    sampled = total * total * avg > budget
    if sampled:
        rng = random.Random(seed)
        want = max(1, budget // avg)
        pair_space = sorted(
            (rng.randrange(total), rng.randrange(total)) for _ in range(want)
        )
    else:
        pair_space = itertools.product(range(total), repeat=2)

    witness = None
    checked = 0
    pairs = 0
    for ia, ib in pair_space:
        pairs += 1
        ca, cb = compressed[ia], compressed[ib]
        agree = True
        for t in positions[ia]:
            checked += 1
            if ca[t % len(ca)] != cb[t % len(cb)]:
                agree = False
                break
        if agree and states[ia] != states[ib]:
            witness = {"a_state": list(states[ia]), "b_state": list(states[ib]), "k": k}
            break

    params = {
        "p": p,
        "e": ctx.e,
        "n": cert.n,
        "f": _fmt_coeffs(cert.f),
        "g": format_univariate(m.g),
        "eta": format_multipoly(m.eta),
        "k": k,
    }
    counts = {"positions": checked, "pairs": pairs}
    return _report("alpha-k", params, witness, counts, sampled, seed, started)


# ---------------------------------------------------------------------------
# uniform-map constructions

def construct_thm7(g: UnivariateFn, s: int, e: int) -> CompressingMap:
    """Map g(x_top) + psi_{z,w} whose compressed sequences for a and -a
    are s-uniform; z and w solve g(0) + z = s and g((p-1)/2) + w = s."""
    if not is_permutation(g):
        raise InvalidInputError("g must be a permutation polynomial")
    p = g.p
    z = (s - g(0)) % p
    w = (s - g((p - 1) // 2)) % p
    return CompressingMap(g=g, eta=psi_zw(p, e, z, w), e=e)


def thm8_mask_set(g: UnivariateFn, s: int) -> set[int]:
    """The shifts w for which s is missed by w + image(g)."""
    img = image_set(g)
    return {w for w in range(g.p) if (s - w) % g.p not in img}


def construct_thm8(
    g: UnivariateFn,
    s: int,
    lam: int,
    r: int,
    e: int,
    assignment: dict | int | None = None,
) -> CompressingMap | None:
    """Map g(x_top) + psi_{z,W} whose compressed sequences for a and
    lambda*a are s-uniform; None when the construction does not apply.

    Needs a non-permutation g whose fibre over r is closed under scaling
    by lambda, and a nonempty W = {w : s not in w + image(g)}. The
    off-zero values of psi are free in W; they default to the constant
    min(W) and are never chosen randomly.
    """
    p = g.p
    lam %= p
    if lam in (0, 1):
        raise InvalidInputError("the scaling factor must avoid 0 and 1")
    img = image_set(g)
    if r % p not in img:
        raise InvalidInputError(f"r = {r} is not a value of g")
    if is_permutation(g):
        return None
    r %= p
    for y in range(p):
        if (g(y) == r) != (g(lam * y % p) == r):
            return None
    allowed = thm8_mask_set(g, s)
    if not allowed:
        return None
    z = (s - r) % p
    if assignment is None:
        assignment = min(allowed)
    return CompressingMap(g=g, eta=psi_zW(p, e, z, allowed, assignment), e=e)


@dataclass
class UniformCount:
    """Per-s verdicts of the scaled-pair uniformity scan."""

    holding: tuple[int, ...]
    vacuous: tuple[int, ...]
    failing: dict[int, dict]
    pairs: int
    positions: int
    sampled: bool
    seed: int

    @property
    def count(self) -> int:
        return len(self.holding)


def count_uniform_s(
    cert: PrimitivityCertificate,
    m: CompressingMap,
    lam: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> UniformCount:
    """For each s, test s-uniformity of (compress(a), compress(lam * a))
    over all primitive a.

    s outside the image of the map is vacuously uniform and reported
    separately. Verdicts are memoized per shift class of the initial
    state, which is exact because uniformity is rotation-invariant; if
    even that exceeds the budget the scan samples states instead.
    """
    started = time.perf_counter()
    ctx = cert.f.ctx
    p = ctx.p
    if not cert.strongly_primitive:
        raise InvalidInputError("the count needs a strongly primitive polynomial")
    lam %= ctx.modulus
    if lam % p == 0:
        raise InvalidInputError("the scaling factor must be a unit")
    phi = value_table(m, ctx)
    phi_lam = tuple(phi[lam * v % ctx.modulus] for v in range(ctx.modulus))
    img = set(phi)

    reps, index = shift_classes(cert.f)
    n_states = len(index)
    period = reps[0].period if reps else 1
    positions = 0
    sampled = len(reps) * period * p > budget
    if sampled:
        rng = random.Random(seed)
        states = sorted(rng.sample(sorted(index), max(1, budget // (period * p))))
        scan_seqs = [(generate(cert.f, st), st) for st in states]
        pairs = len(scan_seqs)
    else:
        scan_seqs = [(rep, rep.initial_state) for rep in reps]
        pairs = n_states

    holding = []
    vacuous = []
    failing: dict[int, dict] = {}
    for s in range(p):
        if s not in img:
            vacuous.append(s)
            continue
        witness = None
        for seq, state in scan_seqs:
            for t in range(seq.period):
                positions += 1
                v = seq.terms[t]
                if (phi[v] == s) != (phi_lam[v] == s):
                    witness = {"state": list(state), "t": t, "s": s}
                    break
            if witness:
                break
        if witness is None:
            holding.append(s)
        else:
            failing[s] = witness
    return UniformCount(
        holding=tuple(holding),
        vacuous=tuple(vacuous),
        failing=failing,
        pairs=pairs,
        positions=positions,
        sampled=sampled,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# suites

def suite_carry(ps=(3, 5, 7, 11)) -> list[UniformityReport]:
    """Top coefficient of the interpolated carry map equals -u mod p."""
    reports = []
    for p in ps:
        started = time.perf_counter()
        witness = None
        for u in range(p):
            fn = carry_map_poly(u, p)
            if fn.coeff(p - 1) != (p - u) % p:
                witness = {"u": u, "coefficient": fn.coeff(p - 1)}
                break
        counts = {"positions": p, "pairs": 0}
        reports.append(_report("carry", {"p": p}, witness, counts, False, 0, started))
    return reports


def suite_legendre(ps=(3, 5, 7, 11, 13)) -> list[UniformityReport]:
    """The square-shift character sum and the image-overlap closed form."""
    reports = []
    for p in ps:
        started = time.perf_counter()
        witness = None
        for w in range(p):
            expected = p - 1 if w % p == 0 else -1
            got = legendre_sum(w, p)
            if got != expected:
                witness = {"w": w, "sum": got, "expected": expected}
                break
        reports.append(
            _report("legendre-sum", {"p": p}, witness, {"positions": p, "pairs": 0},
                    False, 0, started)
        )
        started = time.perf_counter()
        witness = None
        for w in range(1, p):
            brute = intersection_count(p, w)
            formula = intersection_count_formula(p, w)
            if brute != formula:
                witness = {"w": w, "brute": brute, "formula": formula}
                break
        reports.append(
            _report("legendre-intersection", {"p": p}, witness,
                    {"positions": p - 1, "pairs": 0}, False, 0, started)
        )
    return reports


def _sample_primitive_states(ctx: RingContext, n: int, count: int, rng: random.Random):
    states = []
    seen = set()
    while len(states) < count:
        state = tuple(rng.randrange(ctx.modulus) for _ in range(n))
        if state in seen or not any(v % ctx.p for v in state):
            continue
        seen.add(state)
        states.append(state)
    return states


def suite_recurrence(
    p: int = 3, n: int = 2, es=(2, 3, 4), num_states: int = 10, seed: int = 0
) -> list[UniformityReport]:
    """Shift and carry expansion identities over seeded primitive states,
    for every j in [0, p).

    If the carry identity fails under the primary reading, the nested
    fallback reading is tried and flagged in the report parameters.
    """
    reports = []
    for e in es:
        started = time.perf_counter()
        ctx = RingContext(p, e)
        cert = find_primitive(ctx, n)
        if cert is None:
            raise InvalidInputError(f"no primitive polynomial for p={p}, e={e}, n={n}")
        rng = random.Random(seed)
        states = _sample_primitive_states(ctx, n, num_states, rng)
        witness = None
        fallback = False
        positions = 0
        for state in states:
            seq = generate(cert.f, state)
            for j in range(p):
                positions += seq.period
                t = shift_identity_check(seq, cert, j)
                if t is not None:
                    witness = {"state": list(state), "j": j, "t": t,
                               "identity": "shift"}
                    break
                if e >= 3:
                    positions += seq.period
                    t = carry_identity_check(seq, cert, j)
                    if t is not None:
                        fallback = True
                        t_nested = carry_identity_check(seq, cert, j, nested=True)
                        if t_nested is not None:
                            witness = {"state": list(state), "j": j, "t": t_nested,
                                       "identity": "carry"}
                            break
            if witness:
                break
        params = {
            "p": p, "e": e, "n": n, "f": _fmt_coeffs(cert.f),
            "states": len(states), "j_max": p - 1, "fallback_reading": fallback,
        }
        counts = {"positions": positions, "pairs": len(states)}
        reports.append(_report("recurrence", params, witness, counts, False, seed, started))
    return reports


def _orbit_reps(f: RingPolynomial) -> list[LRSequence]:
    # One generated sequence per shift orbit of the full state space.
    n = f.degree
    seen: set[tuple[int, ...]] = set()
    reps = []
    for state in itertools.product(range(f.ctx.modulus), repeat=n):
        if state in seen:
            continue
        s = generate(f, state)
        reps.append(s)
        for t in range(s.period):
            seen.add(s.state_at(t))
    return reps


def suite_periods(p: int = 3, n: int = 2, es=(2, 3)) -> list[UniformityReport]:
    """Period laws for every primitive f and every state, via one
    representative per shift orbit (periods are rotation-invariant)."""
    reports = []
    for e in es:
        started = time.perf_counter()
        ctx = RingContext(p, e)
        T = p**n - 1
        witness = None
        orbits = 0
        num_f = 0
        for f in iter_primitive(ctx, n):
            num_f += 1
            for seq in _orbit_reps(f):
                orbits += 1
                lowest = next(
                    (i for i in range(e) if not level(seq, i).is_zero()), None
                )
                expected = 1 if lowest is None else p ** (e - 1 - lowest) * T
                if seq.period != expected:
                    witness = {"f": _fmt_coeffs(f), "state": list(seq.initial_state),
                               "period": seq.period, "expected": expected}
                    break
                if lowest == 0:
                    for i in range(e):
                        if level(seq, i).period != p**i * T:
                            witness = {"f": _fmt_coeffs(f),
                                       "state": list(seq.initial_state),
                                       "level": i,
                                       "period": level(seq, i).period,
                                       "expected": p**i * T}
                            break
                    if witness:
                        break
            if witness:
                break
        params = {"p": p, "e": e, "n": n, "generators": num_f}
        counts = {"positions": orbits, "pairs": num_f}
        reports.append(_report("periods", params, witness, counts, False, 0, started))
    return reports


def _value_set(a: LevelSequence, b: LevelSequence, k: int) -> set[int]:
    span = math.lcm(a.period, b.period)
    return {a.at(t) for t in range(span) if b.at(t) == k}


def _proportional(u: LevelSequence, v: LevelSequence, p: int) -> int | None:
    # lambda with u = lambda * v, if any (0 allowed for the zero sequence).
    span = math.lcm(u.period, v.period)
    for lam in range(p):
        if all(u.at(t) == lam * v.at(t) % p for t in range(span)):
            return lam
    return None


def suite_distribution(p: int = 3, n: int = 2, e: int = 2) -> list[UniformityReport]:
    """Value-distribution laws for m-sequence pairs, the top-level value
    sets of a recurring sequence at marked positions, and proportional
    markers forcing equal lower levels."""
    reports = []

    # m-sequence pairs over Z/p: dependent pairs give a singleton value
    # set, independent pairs reach every value at k != 0.
    started = time.perf_counter()
    ctx1 = RingContext(p, 1)
    witness = None
    cells = 0
    for f in iter_primitive(ctx1, n):
        states = list(itertools.product(range(p), repeat=n))
        for sa in states:
            a = level_sequence(p, generate(f, sa).terms)
            for sb in states:
                if all(v == 0 for v in sb):
                    continue
                b = level_sequence(p, generate(f, sb).terms)
                lam = _proportional(a, b, p)
                for k in range(p):
                    if lam is None and k == 0:
                        # degree-2 state spaces cannot pair 0 with every
                        # value; the law is stated for k != 0
                        continue
                    cells += 1
                    got = _value_set(a, b, k)
                    expected = {lam * k % p} if lam is not None else set(range(p))
                    if got != expected:
                        witness = {"f": _fmt_coeffs(f), "a_state": list(sa),
                                   "b_state": list(sb), "k": k,
                                   "got": sorted(got)}
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    reports.append(
        _report("distribution-linear-relation", {"p": p, "n": n, "e": 1}, witness,
                {"positions": cells, "pairs": 0}, False, 0, started)
    )

    # top-level value sets of any recurring sequence at marker positions:
    # all of Z/p, or a singleton in the fully-degenerate proportional case.
    # Exhaustive over states, markers and k for the first two generators.
    started = time.perf_counter()
    ctx = RingContext(p, e)
    witness = None
    cells = 0
    for f in itertools.islice(iter_primitive(ctx, n), 2):
        f1 = RingPolynomial(ctx1, tuple(c % p for c in f.coeffs))
        gammas = [
            level_sequence(p, generate(f1, gs).terms)
            for gs in itertools.product(range(p), repeat=n)
            if any(gs)
        ]
        for c_state in itertools.product(range(ctx.modulus), repeat=n):
            c_seq = generate(f, c_state)
            c_top = level(c_seq, e - 1)
            lower_zero = all(level(c_seq, i).is_zero() for i in range(e - 1))
            for gamma in gammas:
                for k in range(1, p):
                    cells += 1
                    got = {
                        c_top.at(t)
                        for t in range(math.lcm(c_seq.period, gamma.period))
                        if gamma.at(t) == k
                    }
                    if len(got) == p:
                        continue
                    if len(got) != 1:
                        witness = {"f": _fmt_coeffs(f), "state": list(c_state),
                                   "k": k, "got": sorted(got)}
                        break
                    lam = _proportional(c_top, gamma, p)
                    if not lower_zero or lam is None or got != {lam * k % p}:
                        witness = {"f": _fmt_coeffs(f), "state": list(c_state),
                                   "k": k, "got": sorted(got)}
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    reports.append(
        _report("distribution-relation", {"p": p, "n": n, "e": e}, witness,
                {"positions": cells, "pairs": 0}, False, 0, started)
    )

    # proportional markers: if the top levels differ by delta + lam * (.)
    # wherever alpha = k, then lam = 1, the lower levels agree, and the
    # top-level difference is delta * k^{-1} * alpha. Exhaustive over
    # state pairs for the first two strongly primitive generators.
    started = time.perf_counter()
    witness = None
    cells = 0
    strong = (f for f in iter_primitive(ctx, n) if certify(f).strongly_primitive)
    for f in itertools.islice(strong, 2):
        cert = certify(f)
        states = list(primitive_states(ctx, n))
        seqs = {st: generate(f, st) for st in states}
        alphas = {st: alpha_sequence(seqs[st], cert) for st in states}
        for sa in states:
            a_top = level(seqs[sa], e - 1)
            alpha = alphas[sa]
            for sb in states:
                beta = alphas[sb]
                lam = _proportional(beta, alpha, p)
                if lam is None or lam == 0:
                    continue
                b_top = level(seqs[sb], e - 1)
                span = math.lcm(seqs[sa].period, seqs[sb].period, alpha.period)
                for k in range(1, p):
                    marked = [t for t in range(span) if alpha.at(t) == k]
                    deltas = {(b_top.at(t) - lam * a_top.at(t)) % p for t in marked}
                    if len(deltas) != 1:
                        continue
                    cells += 1
                    delta = deltas.pop()
                    kinv = pow(k, p - 2, p)
                    lower_equal = all(
                        seqs[sa].at(t) % p ** (e - 1) == seqs[sb].at(t) % p ** (e - 1)
                        for t in range(span)
                    )
                    diff_ok = all(
                        (b_top.at(t) - a_top.at(t)) % p
                        == delta * kinv * alpha.at(t) % p
                        for t in range(span)
                    )
                    if lam != 1 or not lower_equal or not diff_ok:
                        witness = {"f": _fmt_coeffs(f), "a_state": list(sa),
                                   "b_state": list(sb), "k": k, "lambda": lam,
                                   "delta": delta}
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    reports.append(
        _report("distribution-highest-level", {"p": p, "n": n, "e": e}, witness,
                {"positions": cells, "pairs": 0}, False, 0, started)
    )
    return reports


def _eta_grid(p: int, e: int, sample: int, seed: int):
    """Canonical eta polynomials: the full table space when it is small
    (all p^p functions at e = 2), a seeded sample of tables otherwise."""
    arity = e - 1
    size = p**arity
    if p**size <= 1000:
        for values in itertools.product(range(p), repeat=size):
            yield from_table(p, arity, values)
        return
    rng = random.Random(seed)
    for _ in range(sample):
        yield from_table(p, arity, [rng.randrange(p) for _ in range(size)])


def suite_alpha_k(
    p: int = 3,
    e: int = 2,
    n: int = 2,
    f_coeffs=None,
    deg_g: int = 1,
    ks=None,
    eta_sample: int = 27,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> list[UniformityReport]:
    """Injectivity-from-agreement over a grid of eta maps and markers k."""
    ctx = RingContext(p, e)
    if deg_g == 1:
        g = UnivariateFn(p, (0, 1))
    elif deg_g == 2:
        g = UnivariateFn(p, (0, 0, 1))
    else:
        raise InvalidInputError(f"deg g must be 1 or 2 in this suite, got {deg_g}")
    if f_coeffs is not None:
        cert = certify(RingPolynomial(ctx, tuple(f_coeffs)))
    else:
        cert = find_primitive(ctx, n, strongly=deg_g >= 2)
        if cert is None and deg_g >= 2:
            cert = find_primitive(RingContext(p, e), n + 1, strongly=True)
        if cert is None:
            raise InvalidInputError(f"no qualifying polynomial for p={p}, e={e}")
    if deg_g >= 2 and not cert.strongly_primitive:
        raise InvalidInputError("deg g >= 2 requires a strongly primitive f")
    ks = tuple(ks) if ks else tuple(range(1, p))
    reports = []
    for eta in _eta_grid(p, e, eta_sample, seed):
        m = CompressingMap(g=g, eta=eta, e=e)
        for k in ks:
            reports.append(verify_alpha_k_injectivity(cert, m, k, budget, seed))
    return reports


def _uniform_scan_classes(reps, phi, phi_other, s):
    """Witness of an s-hit disagreement across shift classes, plus the
    number of positions compared."""
    positions = 0
    for rep in reps:
        for t in range(rep.period):
            positions += 1
            v = rep.terms[t]
            if (phi[v] == s) != (phi_other[v] == s):
                return {"state": list(rep.initial_state), "t": t, "s": s}, positions
    return None, positions


def suite_thm7(ps=(3, 5), e: int = 2, n: int = 2) -> list[UniformityReport]:
    """Permutation-top maps: compressed a and -a are s-uniform for the
    map constructed for each s; plus the closed form z = 0, w = (p+1)/2
    at g = x, s = 0."""
    reports = []
    for p in ps:
        ctx = RingContext(p, e)
        cert = find_primitive(ctx, n)
        if cert is None:
            raise InvalidInputError(f"no primitive polynomial for p={p}, e={e}, n={n}")
        g = UnivariateFn(p, (0, 1))

        started = time.perf_counter()
        m0 = construct_thm7(g, 0, e)
        zero = (0,) * (e - 1)
        probe = (1,) + (0,) * (e - 2)
        z0, w0 = m0.eta(zero), m0.eta(probe)
        witness = None
        if z0 != 0 or w0 != (p + 1) // 2:
            witness = {"z": z0, "w": w0, "expected_w": (p + 1) // 2}
        reports.append(
            _report("thm7-closed-form", {"p": p, "e": e, "g": "x", "s": 0}, witness,
                    {"positions": 2, "pairs": 0}, False, 0, started)
        )

        reps, index = shift_classes(cert.f)
        neg = ctx.modulus - 1
        for s in range(p):
            started = time.perf_counter()
            m = construct_thm7(g, s, e)
            phi = value_table(m, ctx)
            phi_neg = tuple(phi[neg * v % ctx.modulus] for v in range(ctx.modulus))
            witness, positions = _uniform_scan_classes(reps, phi, phi_neg, s)
            params = {"p": p, "e": e, "n": n, "f": _fmt_coeffs(cert.f), "g": "x",
                      "s": s, "eta": format_multipoly(m.eta)}
            counts = {"positions": positions, "pairs": len(index)}
            reports.append(_report("thm7", params, witness, counts, False, 0, started))
    return reports


def suite_thm8(ps=(5, 7), e: int = 2, n: int = 2) -> list[UniformityReport]:
    """Non-permutation tops with a lambda-closed fibre: compressed a and
    lambda*a are s-uniform for the constructed masked map; permutation
    tops must be rejected as inapplicable."""
    reports = []
    for p in ps:
        ctx = RingContext(p, e)
        cert = find_primitive(ctx, n)
        if cert is None:
            raise InvalidInputError(f"no primitive polynomial for p={p}, e={e}, n={n}")
        g = UnivariateFn(p, (0, 0, 1))
        lam = p - 1

        started = time.perf_counter()
        witness = None
        if construct_thm8(UnivariateFn(p, (0, 1)), 0, lam, 0, e) is not None:
            witness = {"reason": "permutation top was not rejected"}
        reports.append(
            _report("thm8-inapplicable", {"p": p, "e": e, "g": "x"}, witness,
                    {"positions": 1, "pairs": 0}, False, 0, started)
        )

        reps, index = shift_classes(cert.f)
        lam_res = ctx.modulus - 1
        for s in range(p):
            started = time.perf_counter()
            m = construct_thm8(g, s, lam, 0, e)
            if m is None:
                reports.append(
                    _report("thm8", {"p": p, "e": e, "s": s, "applicable": False},
                            None, {"positions": 0, "pairs": 0}, False, 0, started)
                )
                continue
            phi = value_table(m, ctx)
            phi_lam = tuple(phi[lam_res * v % ctx.modulus] for v in range(ctx.modulus))
            witness, positions = _uniform_scan_classes(reps, phi, phi_lam, s)
            params = {"p": p, "e": e, "n": n, "f": _fmt_coeffs(cert.f), "g": "x^2",
                      "s": s, "lambda": lam, "eta": format_multipoly(m.eta)}
            counts = {"positions": positions, "pairs": len(index)}
            reports.append(_report("thm8", params, witness, counts, False, 0, started))
    return reports


def suite_thm9(
    ps=(5, 7, 11), e: int = 2, n: int = 2,
    budget: int = DEFAULT_BUDGET, seed: int = 0,
) -> list[UniformityReport]:
    """The number of non-vacuous s-uniform values for g = x^2 with the
    zero-pinned shift mask equals floor(p/4) + 1 and matches the
    image-set prediction."""
    reports = []
    for p in ps:
        started = time.perf_counter()
        ctx = RingContext(p, e)
        cert = find_primitive(ctx, n, strongly=True)
        if cert is None:
            raise InvalidInputError(f"no strongly primitive f for p={p}, e={e}, n={n}")
        w = thm9_choose_w(p)
        g = UnivariateFn(p, (0, 0, 1))
        m = CompressingMap(g=g, eta=psi_zw(p, e, 0, w), e=e)
        uc = count_uniform_s(cert, m, ctx.modulus - 1, budget, seed)
        sq = squares(p)
        predicted = sorted(sq - {(w + v) % p for v in sq})
        expected_count = p // 4 + 1
        witness = None
        if list(uc.holding) != predicted or uc.count != expected_count:
            witness = {"holding": list(uc.holding), "predicted": predicted,
                       "expected_count": expected_count}
        params = {"p": p, "e": e, "n": n, "f": _fmt_coeffs(cert.f), "w": w,
                  "lambda": -1, "count": uc.count,
                  "vacuous": list(uc.vacuous)}
        counts = {"positions": uc.positions, "pairs": uc.pairs}
        reports.append(_report("thm9", params, witness, counts, uc.sampled, seed, started))
    return reports


def run_suite(
    name: str,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    **overrides,
) -> list[UniformityReport]:
    """Dispatch a named suite with acceptance-scale defaults."""
    if name == "carry":
        return suite_carry(overrides.get("ps", (3, 5, 7, 11)))
    if name == "legendre":
        return suite_legendre(overrides.get("ps", (3, 5, 7, 11, 13)))
    if name == "recurrence":
        return suite_recurrence(
            p=overrides.get("p", 3), n=overrides.get("n", 2),
            es=overrides.get("es", (2, 3, 4)),
            num_states=overrides.get("num_states", 10), seed=seed,
        )
    if name == "periods":
        return suite_periods(
            p=overrides.get("p", 3), n=overrides.get("n", 2),
            es=overrides.get("es", (2, 3)),
        )
    if name == "distribution":
        return suite_distribution(
            p=overrides.get("p", 3), n=overrides.get("n", 2),
            e=overrides.get("e", 2),
        )
    if name == "alpha-k":
        return suite_alpha_k(
            p=overrides.get("p", 3), e=overrides.get("e", 2),
            n=overrides.get("n", 2), f_coeffs=overrides.get("f_coeffs"),
            deg_g=overrides.get("deg_g", 1), ks=overrides.get("ks"),
            eta_sample=overrides.get("eta_sample", 27),
            budget=budget, seed=seed,
        )
    if name == "thm7":
        return suite_thm7(overrides.get("ps", (3, 5)),
                          e=overrides.get("e", 2), n=overrides.get("n", 2))
    if name == "thm8":
        return suite_thm8(overrides.get("ps", (5, 7)),
                          e=overrides.get("e", 2), n=overrides.get("n", 2))
    if name == "thm9":
        return suite_thm9(overrides.get("ps", (5, 7, 11)),
                          e=overrides.get("e", 2), n=overrides.get("n", 2),
                          budget=budget, seed=seed)
    if name == "all":
        reports = []
        reports += suite_carry()
        reports += suite_legendre()
        reports += suite_recurrence(seed=seed)
        reports += suite_periods()
        reports += suite_distribution()
        reports += suite_alpha_k(deg_g=1, f_coeffs=(8, 8, 1), budget=budget, seed=seed)
        reports += suite_alpha_k(deg_g=2, budget=budget, seed=seed)
        reports += suite_thm7()
        reports += suite_thm8()
        reports += suite_thm9(budget=budget, seed=seed)
        return reports
    raise InvalidInputError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
