"""Candidate enumeration and the orbit-minimum searches for the exceptional cases.

The solvable subgroups of the synthesised normalizer N that contain
<E, scalars> correspond exactly to the solvable subgroups of the small outer
quotient.  Enumerating the quotient's subgroup classes and pulling them back
is therefore a complete search over scalar-containing candidates, and adding
the scalar group never raises an orbit count, so the minimum over these
pullbacks is the minimum over all solvable E-containing subgroups of N.

For e = 6 the candidates are Kronecker products of width-2 and width-3
factors; for e in {8, 16} only targeted wreath-type constructions are run and
the case verdicts rest on the arithmetic or coin-counting branches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds
from .engine import (GroupSpec, bsgs_build, contains, mulclose, subgroup_classes)
from .errors import InternalError, NotExceptional
from .extraspecial import (ExtraspecialData, FLAVOR_MINUS, available_flavors,
                           build_extraspecial, commutator_form)
from .fieldmat import FieldMatrix, kron, kron_many
from .gfpoly import distinct_irreducible_factors
from .modprops import is_irreducible, is_quasiprimitive
from .normalizer import normalizer_generators
from .orbits import count_orbits_bfs


# ---------------------------------------------------------------------------
# Candidate enumeration over one extraspecial flavor.

@dataclass
class Candidate:
    """One pullback candidate: <E, scalars> extended by an outer subgroup class."""

    flavor: str
    class_id: int
    outer_order: int
    spec: GroupSpec
    down_set: frozenset            # class ids of outer subgroups below this one
    irreducible: bool = False
    quasiprimitive: bool = False
    orbit_count: int | None = None
    skipped: bool = False

    @property
    def passes(self):
        return self.irreducible and self.quasiprimitive


@dataclass
class CandidateSet:
    """All filtered candidates for one flavor of E inside GL(e, p)."""

    e: int
    p: int
    flavor: str
    normalizer: object
    quotient: object               # AbstractGroup of the outer group
    classes: list
    candidates: list = field(default_factory=list)


def _transitive_down_set(classes, cid):
    out = set()
    stack = [cid]
    while stack:
        cur = stack.pop()
        for parent in classes[cur].parents:
            if parent not in out:
                out.add(parent)
                stack.append(parent)
    return frozenset(out)


def _witness_families(nspec, Gq, rep):
    """Normal-subgroup witnesses for a pullback: E, E*scalars, derived terms."""
    E = nspec.E
    witnesses = [list(E.gens), list(E.gens) + [nspec.scalar_gen]]
    series = Gq.derived_series_of(rep)
    for term in series[1:]:
        if len(term) in (1, len(rep)):
            continue
        gens = list(E.gens) + [nspec.scalar_gen]
        gens += [nspec.lifts[_outer_id(nspec, Gq, i)] for i in Gq.minimal_generators(term)]
        witnesses.append(gens)
    return witnesses


def _outer_id(nspec, Gq, abstract_idx):
    key = Gq.elements[abstract_idx].key()[2]
    return nspec._outer_index[key]


def enumerate_candidates(e, p, lattice_budget=None, verify_orders=True):
    """CandidateSets for every flavor available over GF(p), filtered.

    Pullbacks automatically contain E and the scalar group; the filters are
    irreducibility and quasi-primitivity over the structural witness family.
    Solvability is inherited: the outer classes are enumerated solvable and
    the kernel <E, scalars> is nilpotent-by-cyclic.
    """
    if e not in (2, 3, 4):
        raise InternalError("exhaustive enumeration supports e in {2, 3, 4}")
    kwargs = {}
    if lattice_budget is not None:
        kwargs["lattice_budget"] = lattice_budget
    out = []
    for flavor in available_flavors(e, p):
        r, k = (2, e.bit_length() - 1) if e & (e - 1) == 0 else (e, 1)
        E = build_extraspecial(r, k, flavor, p)
        nspec = normalizer_generators(E)
        Gq, classes = subgroup_classes(nspec.quotient_group_spec(),
                                       solvable_only=True, **kwargs)
        cset = CandidateSet(e=e, p=p, flavor=flavor, normalizer=nspec,
                            quotient=Gq, classes=classes)
        for cls in classes:
            outer_elems = [Gq.elements[i].a for i in sorted(cls.rep)]
            spec = nspec.pullback(
                outer_elems,
                provenance=f"e={e} p={p} {flavor} outer class #{cls.class_id} "
                           f"(outer order {cls.order})")
            if verify_orders and bsgs_build(spec).order() != spec.order_hint:
                raise InternalError("pullback order bookkeeping failed")
            cand = Candidate(flavor=flavor, class_id=cls.class_id,
                             outer_order=cls.order, spec=spec,
                             down_set=_transitive_down_set(classes, cls.class_id))
            cand.irreducible = is_irreducible(spec)
            if cand.irreducible:
                cand.quasiprimitive = is_quasiprimitive(
                    spec, _witness_families(nspec, Gq, cls.rep), check_normal=False)
            cset.candidates.append(cand)
        out.append(cset)
    return out


@dataclass
class SearchResult:
    e: int
    p: int
    threshold: int
    lb: int | None
    witness: str | None
    below_threshold: list
    examined: int
    skipped: int
    per_candidate: list            # (flavor, class_id, outer_order, count or None)

    def to_dict(self):
        return {
            "e": self.e, "p": self.p, "threshold": self.threshold,
            "lb": self.lb, "witness": self.witness,
            "below_threshold": list(self.below_threshold),
            "examined": self.examined, "skipped": self.skipped,
        }


def min_orbits_search(e, p, threshold, prune=True, cache=None,
                      candidate_sets=None):
    """Minimum orbit count over all filtered candidates, with down-set pruning.

    Once a candidate's count reaches the threshold every outer class below it
    is skipped for the below-threshold list: subgroups only split orbits
    further.  The returned lb is still exact because orbit counts are
    minimised at lattice-maximal candidates.
    """
    csets = candidate_sets if candidate_sets is not None else enumerate_candidates(e, p)
    lb = None
    witness = None
    below = []
    per_candidate = []
    examined = skipped = 0
    table_cache = {}
    for cset in csets:
        to_skip = set()
        order_sorted = sorted(cset.candidates,
                              key=lambda c: (-c.outer_order, c.class_id))
        for cand in order_sorted:
            if not cand.passes:
                continue
            if prune and cand.class_id in to_skip:
                cand.skipped = True
                skipped += 1
                per_candidate.append((cand.flavor, cand.class_id, cand.outer_order, None))
                continue
            count = _cached_orbit_count(cand.spec, cache, table_cache)
            cand.orbit_count = count
            examined += 1
            per_candidate.append((cand.flavor, cand.class_id, cand.outer_order, count))
            if lb is None or count < lb:
                lb = count
                witness = cand.spec.provenance
            if count < threshold:
                below.append(cand.spec.provenance)
            elif prune:
                to_skip |= cand.down_set
    return SearchResult(e=e, p=p, threshold=threshold, lb=lb, witness=witness,
                        below_threshold=below, examined=examined, skipped=skipped,
                        per_candidate=per_candidate)


def _cached_orbit_count(spec, cache, table_cache=None):
    if cache is None:
        return count_orbits_bfs(spec, table_cache=table_cache).orbit_count
    key = f"orbit-count:{spec.digest()}"
    hit = cache.get(key)
    if hit is not None:
        return int(hit["orbit_count"])
    count = count_orbits_bfs(spec, table_cache=table_cache).orbit_count
    cache.put(key, {"orbit_count": count})
    return count


# ---------------------------------------------------------------------------
# Semilinear factors: the normalizer of a Singer cycle, as d x d matrices.

def _smallest_irreducible(p, d):
    """Lexicographically smallest monic irreducible of degree d over GF(p)."""
    base = [0] * d + [1]
    counters = [0] * d
    while True:
        f = tuple(counters) + (1,)
        facs = distinct_irreducible_factors(f, p)
        if facs == [f]:
            return f
        for i in range(d):
            counters[i] += 1
            if counters[i] < p:
                break
            counters[i] = 0
        else:
            raise InternalError("no irreducible polynomial found")


def _field_mult_matrix(coeffs, modpoly, p):
    """Matrix of multiplication by the residue-class element with the given coeffs."""
    from .gfpoly import mod as poly_mod, mul as poly_mul
    d = len(modpoly) - 1
    cols = []
    for i in range(d):
        xi = tuple([0] * i + [1])
        prod = poly_mod(poly_mul(tuple(coeffs), xi, p), modpoly, p)
        col = list(prod) + [0] * (d - len(prod))
        cols.append(col)
    return FieldMatrix(p, np.array(cols, dtype=np.int64).T)


def _frobenius_matrix(modpoly, p):
    from .gfpoly import mod as poly_mod, powmod
    d = len(modpoly) - 1
    cols = []
    for i in range(d):
        xi = tuple([0] * i + [1])
        img = powmod(xi, p, modpoly, p)
        col = list(img) + [0] * (d - len(img))
        cols.append(col)
    return FieldMatrix(p, np.array(cols, dtype=np.int64).T)


def singer_normalizer(p, d):
    """<multiplication by a generator of GF(p**d)*, Frobenius> inside GL(d, p)."""
    from .gfpoly import mod as poly_mod, mul as poly_mul
    modpoly = _smallest_irreducible(p, d)
    full = p**d - 1

    def elem_order(coeffs):
        acc = (1,)
        o = 0
        while True:
            acc = poly_mod(poly_mul(acc, tuple(coeffs), p), modpoly, p)
            o += 1
            if acc == (1,):
                return o
            if o > full:
                raise InternalError("order computation ran away")

    gen = None
    for idx in range(p, p**d):
        coeffs = tuple((idx // p**i) % p for i in range(d))
        if elem_order(coeffs) == full:
            gen = coeffs
            break
    if gen is None:
        raise InternalError("no multiplicative generator found")
    singer = _field_mult_matrix(gen, modpoly, p)
    frob = _frobenius_matrix(modpoly, p)
    return GroupSpec(p, d, [singer, frob],
                     provenance=f"normalizer of a Singer cycle in GL({d},{p})",
                     order_hint=d * full)


def _normal_witnesses_from_lattice(Gq, classes):
    """Generators of every normal subgroup read off the class list."""
    out = []
    for cls in classes:
        if cls.class_size == 1 and 1 < cls.order:
            out.append([Gq.elements[i] for i in Gq.minimal_generators(cls.rep)])
    return out


def semilinear_factor_groups(p, d, lattice_budget=None):
    """Irreducible quasi-primitive subgroups of the Singer-cycle normalizer."""
    kwargs = {}
    if lattice_budget is not None:
        kwargs["lattice_budget"] = lattice_budget
    parent = singer_normalizer(p, d)
    Gq, classes = subgroup_classes(parent, solvable_only=True, **kwargs)
    witnesses_all = _normal_witnesses_from_lattice(Gq, classes)
    out = []
    for cls in classes:
        if cls.order == 1:
            continue
        gens = [Gq.elements[i] for i in Gq.minimal_generators(cls.rep)]
        spec = GroupSpec(p, d, gens,
                         provenance=f"semilinear factor, order {cls.order}, "
                                    f"class #{cls.class_id} in GL({d},{p})",
                         order_hint=cls.order)
        if not is_irreducible(spec):
            continue
        rep_set = set(cls.rep)
        own_witnesses = [w for w in witnesses_all
                         if all(x.key() in {Gq.elements[i].key() for i in cls.rep}
                                for x in w)]
        if not is_quasiprimitive(spec, own_witnesses or [gens], check_normal=False):
            continue
        out.append((spec, False))     # False: does not contain the extraspecial core
    return out


def kronecker_factors(dim, p):
    """Candidate primitive solvable subgroups of GL(dim, p): E-route + semilinear."""
    out = []
    for cset in enumerate_candidates(dim, p):
        for cand in cset.candidates:
            if cand.passes:
                out.append((cand.spec, True))
    out.extend(semilinear_factor_groups(p, dim))
    return out


@dataclass
class KroneckerResult:
    p: int
    threshold: int
    lb: int | None
    witness: str | None
    lb_with_core: int | None       # minimum over products with both E-factors
    witness_with_core: str | None
    products_examined: int

    def to_dict(self):
        return {
            "p": self.p, "threshold": self.threshold, "lb": self.lb,
            "witness": self.witness, "lb_with_core": self.lb_with_core,
            "witness_with_core": self.witness_with_core,
            "products_examined": self.products_examined,
        }


def kronecker_search(p=7, threshold=6, cache=None):
    """Minimum orbit count over Kronecker products G2 x G3 inside GL(6, p).

    Factors range over the filtered solvable subgroups of GL(2, p) and
    GL(3, p), semilinear families included; products are refiltered before
    counting orbits on p**6 indices.  Both the unrestricted minimum and the
    minimum over products containing the width-6 extraspecial core are
    reported.
    """
    factors2 = kronecker_factors(2, p)
    factors3 = kronecker_factors(3, p)
    i2 = FieldMatrix.identity(p, 2)
    i3 = FieldMatrix.identity(p, 3)
    lb = witness = None
    lb_core = witness_core = None
    examined = 0
    table_cache = {}
    for g2, core2 in factors2:
        left = [kron(g, i3) for g in g2.generators]
        left_w = [m.a for m in left]
        for g3, core3 in factors3:
            right = [kron(i2, h) for h in g3.generators]
            gens = left + right
            tag = f"({g2.provenance}) x ({g3.provenance})"
            spec = GroupSpec(p, 6, gens, provenance=tag)
            if not is_irreducible(spec):
                continue
            witnesses = [left_w, [m.a for m in right]]
            if not is_quasiprimitive(spec, witnesses, check_normal=False):
                continue
            count = _cached_orbit_count(spec, cache, table_cache)
            examined += 1
            if lb is None or count < lb:
                lb, witness = count, tag
            if core2 and core3 and (lb_core is None or count < lb_core):
                lb_core, witness_core = count, tag
    return KroneckerResult(p=p, threshold=threshold, lb=lb, witness=witness,
                           lb_with_core=lb_core, witness_with_core=witness_core,
                           products_examined=examined)


# ---------------------------------------------------------------------------
# Wreath-type tensor constructions for e in {8, 16}.

def _tensor_slot(mat, slot, copies, p):
    factors = [FieldMatrix.identity(p, 2)] * copies
    factors[slot] = mat
    return kron_many(factors)


def _factor_permutation_matrix(perm, copies, p):
    """Permutation of the tensor slots as a matrix on GF(p)^(2**copies)."""
    dim = 2**copies
    mat = np.zeros((dim, dim), dtype=np.int64)
    for idx in range(dim):
        bits = [(idx >> (copies - 1 - pos)) & 1 for pos in range(copies)]
        to = [bits[perm[pos]] for pos in range(copies)]
        jdx = 0
        for b in to:
            jdx = (jdx << 1) | b
        mat[jdx, idx] = 1
    return FieldMatrix(p, mat, reduce=False)


def tensor_wreath_group(p, copies):
    """The quaternion-block wreath candidate in GL(2**copies, p).

    One full width-2 normalizer block in the first slot plus the slot
    permutations; conjugation by the permutations fills in the other slots,
    so the group is the tensor power of the block group extended by the
    symmetric group on slots.  Outer structure: S3 wr S_copies.
    """
    E2 = build_extraspecial(2, 1, FLAVOR_MINUS, p)
    n2 = normalizer_generators(E2)
    block = n2.group_spec()
    gens = [_tensor_slot(g, 0, copies, p) for g in block.generators]
    cycle = list(range(1, copies)) + [0]
    swap = [1, 0] + list(range(2, copies))
    gens.append(_factor_permutation_matrix(cycle, copies, p))
    if copies > 2:
        gens.append(_factor_permutation_matrix(swap, copies, p))
    block_order = block.order_hint
    fact = 1
    for i in range(2, copies + 1):
        fact *= i
    order = block_order**copies // (p - 1) ** (copies - 1) * fact
    return GroupSpec(p, 2**copies, gens,
                     provenance=f"S3 wr S{copies} tensor construction in "
                                f"GL({2**copies},{p})",
                     order_hint=order)


def tensor_core_extraspecial(p, copies):
    """The all-quaternion-block central product as designated-generator data."""
    E2 = build_extraspecial(2, 1, FLAVOR_MINUS, p)
    gens = []
    for slot in range(copies):
        gens.append(_tensor_slot(E2.gens[0], slot, copies, p))
        gens.append(_tensor_slot(E2.gens[1], slot, copies, p))
    center = FieldMatrix(p, (p - 1) * np.eye(2**copies, dtype=np.int64))
    return ExtraspecialData(2, copies, FLAVOR_MINUS, p, gens, center)


def wreath_outer_image(p, copies):
    """Outer image of the wreath construction on E/Z, with order bookkeeping."""
    E = tensor_core_extraspecial(p, copies)
    form = commutator_form(E)
    g = tensor_wreath_group(p, copies)
    from .extraspecial import coords_mod_center
    image_gens = []
    for gen in g.generators:
        ginv = gen.inv()
        cols = [coords_mod_center(E, form, gen @ x @ ginv) for x in E.gens]
        image_gens.append(FieldMatrix(2, np.stack(cols, axis=1)))
    spec = GroupSpec(2, 2 * copies, image_gens,
                     provenance=f"outer image of the S3 wr S{copies} construction")
    return E, form, spec


def build_remark_group():
    """The GL(16, 3) construction whose action realises a 49-orbit count."""
    return tensor_wreath_group(3, 4)


def remark_group_report(count_orbits=False, cache=None):
    """Structure bookkeeping for the GL(16, 3) construction.

    The action space (3**16 indices) is beyond the stabilizer-chain point
    budget, so solvability is certified through the extension structure:
    the kernel <E, scalars> by explicit closure, the outer image by the
    derived-series engine on its faithful 8-dimensional GF(2) action.
    """
    from .engine import AbstractGroup, is_solvable
    g = build_remark_group()
    E, form, outer = wreath_outer_image(3, 4)
    outer_elems = mulclose(list(outer.generators), maxsize=40000)
    outer_order = len(outer_elems)
    kernel = AbstractGroup.from_spec(
        GroupSpec(3, 16, list(E.gens) + [FieldMatrix(3, 2 * np.eye(16, dtype=np.int64))]),
        lattice_budget=2048)
    report = {
        "p": 3, "n": 16,
        "order": g.order_hint,
        "base_order": kernel.m,
        "outer_order": outer_order,
        "order_bookkeeping_ok": kernel.m * outer_order == g.order_hint,
        "outer_solvable": is_solvable(outer),
        "kernel_solvable": kernel.is_solvable_subset(range(kernel.m)),
    }
    report["solvable"] = report["outer_solvable"] and report["kernel_solvable"]
    if count_orbits:
        rep = count_orbits_bfs(g)
        report["orbit_count"] = rep.orbit_count
        report["orbit_wall_time_s"] = rep.wall_time_s
    return report


def wreath_consistency_count(p, cache=None):
    """Orbit count of the GL(8, p) wreath candidate; a floor check, not a search."""
    g = tensor_wreath_group(p, 3)
    return _cached_orbit_count(g, cache), g.provenance


# ---------------------------------------------------------------------------
# Case orchestration.

_METHOD_PLAN = {
    (17, 4): {4: "search"},
    (19, 4): {4: "search"},
    (7, 6): {3: "arithmetic", 6: "kronecker_search"},
    (5, 8): {4: "arithmetic", 8: "construction"},
    (7, 8): {4: "arithmetic", 8: "construction"},
    (11, 8): {4: "arithmetic", 8: "arithmetic"},
    (13, 8): {4: "arithmetic", 8: "arithmetic"},
    (7, 9): {3: "arithmetic", 9: "arithmetic"},
    (3, 16): {4: "arithmetic", 8: "change_making", 16: "construction"},
    (5, 16): {4: "arithmetic", 8: "arithmetic", 16: "arithmetic"},
}

# Published per-case naive-bound claims (value the published text exceeds).
_CASE_CLAIMS = {
    (7, 6): 6, (5, 8): 8, (7, 8): 53, (11, 8): 259, (13, 8): 820,
    (7, 9): 73, (5, 16): 4791,
}

_CASE_NOTES = {
    (7, 8): ["printed threshold expression names the wrong base; "
             "the printed value 27 matches p = 7 and the exact computation"],
    (3, 16): ["e=8 naive bound falls below the threshold (< 34); "
              "the coin-counting refinement supplies the branch"],
}


def exceeds_threshold_bound(value, p, n):
    """Exact test: value > p**(n/2) / (12 n) + 1, with value a Fraction/int."""
    v = Fraction(value) - 1
    if v <= 0:
        return False
    lhs = (v * 12 * n) ** 2
    return lhs > p**n


def verify_case(p, n, slow=False, cache=None):
    """Reproduce one exceptional case: branches, methods and verdicts."""
    if (p, n) not in bounds.PRINTED_THRESHOLDS:
        raise NotExceptional(f"{p}**{n} is not an exceptional case")
    thr = bounds.threshold(p, n)
    plan = _METHOD_PLAN[(p, n)]
    notes = list(_CASE_NOTES.get((p, n), []))
    branch_dicts = []
    v_size = p**n

    caps = []
    for e in bounds.admissible_widths(p, n):
        caps.append(bounds.dominant_branch(p, n, e).order_cap)
    if (p, n) in _CASE_CLAIMS and caps:
        case_naive = bounds.naive_lower_bound(v_size, max(caps))
        claim = _CASE_CLAIMS[(p, n)]
        notes.append(
            f"combined naive bound {float(case_naive):.2f} "
            f"{'exceeds' if case_naive > claim else 'misses'} the published claim > {claim}")

    for e in bounds.admissible_widths(p, n):
        method = plan.get(e, "arithmetic")
        branch = bounds.dominant_branch(p, n, e)
        entry = branch.to_dict()
        entry["method"] = method
        if method == "arithmetic":
            naive = bounds.naive_lower_bound(v_size, branch.order_cap)
            entry["branch_lb"] = int(-(-naive.numerator // naive.denominator))
            entry["verdict"] = ("verified" if exceeds_threshold_bound(naive, p, n)
                                else "not-verified")
        elif method == "change_making":
            n_coins = bounds.change_making_lb(branch.order_cap, v_size)
            entry["branch_lb"] = n_coins + 1
            entry["verdict"] = "verified" if n_coins + 1 >= thr else "not-verified"
            naive = bounds.naive_lower_bound(v_size, branch.order_cap)
            entry["naive_bound"] = float(naive)
        elif method == "search":
            if slow:
                result = min_orbits_search(e, p, thr, cache=cache)
                entry["branch_lb"] = result.lb
                entry["below_threshold"] = list(result.below_threshold)
                entry["verdict"] = ("verified"
                                    if result.lb is not None and result.lb >= thr
                                    and not result.below_threshold
                                    else "not-verified")
                entry["witness"] = result.witness
            else:
                entry["branch_lb"] = bounds.REFERENCE_MINIMA[(p, n)]
                entry["verdict"] = "consistency-only-with-paper-citation"
                notes.append(f"e={e} exhaustive search skipped in fast mode; "
                             f"published minimum {entry['branch_lb']} cited")
        elif method == "kronecker_search":
            if slow:
                result = kronecker_search(p, thr, cache=cache)
                entry["branch_lb"] = result.lb
                entry["verdict"] = ("verified"
                                    if result.lb is not None and result.lb >= thr
                                    else "not-verified")
                entry["witness"] = result.witness
                entry["lb_with_core"] = result.lb_with_core
            else:
                entry["branch_lb"] = bounds.REFERENCE_MINIMA[(p, n)]
                entry["verdict"] = "consistency-only-with-paper-citation"
                notes.append(f"e={e} product search skipped in fast mode; "
                             f"published minimum {entry['branch_lb']} cited")
        elif method == "construction":
            entry.update(_construction_branch(p, n, e, thr, slow, cache, notes))
        else:
            raise InternalError(f"unknown method {method}")
        branch_dicts.append(entry)
    return bounds.emit_case_report(p, n, branch_dicts, notes)


def _construction_branch(p, n, e, thr, slow, cache, notes):
    """Branches whose exhaustive search is out of desk scope.

    The published minimum is cited; a targeted wreath-type candidate is
    counted as a consistency floor (a value below the published minimum
    would expose a construction or engine bug).
    """
    entry = {}
    if e == 8:
        reference = bounds.REFERENCE_MINIMA[(p, n)]
        count, tag = wreath_consistency_count(p, cache=cache)
        entry["method"] = "consistency_only"
        entry["branch_lb"] = reference
        entry["consistency_count"] = count
        entry["witness"] = tag
        if count < reference:
            entry["verdict"] = "not-verified"
            notes.append(f"e=8 construction counted {count} orbits, below the "
                         f"published minimum {reference}: engine bug suspected")
        else:
            entry["verdict"] = "consistency-only-with-paper-citation"
            notes.append(f"e=8 exhaustive search out of desk scope; published "
                         f"minimum {reference} cited, construction count {count}")
    elif e == 16:
        entry["branch_lb"] = thr
        if slow:
            report = remark_group_report(count_orbits=True, cache=cache)
            entry["method"] = "consistency_only"
            entry["consistency_count"] = report.get("orbit_count")
            entry["solvable"] = report["solvable"]
            ok = report["solvable"] and report["order_bookkeeping_ok"] \
                and report.get("orbit_count", 0) >= thr
            entry["verdict"] = ("consistency-only-with-paper-citation" if ok
                                else "not-verified")
            notes.append(f"e=16 exhaustive search out of desk scope; tensor "
                         f"construction counts {report.get('orbit_count')} orbits")
        else:
            entry["method"] = "out_of_scope"
            entry["verdict"] = "consistency-only-with-paper-citation"
            notes.append("e=16 exhaustive search out of desk scope; published "
                         "empty below-threshold list cited")
    else:
        raise InternalError(f"no construction plan for e={e}")
    return entry
