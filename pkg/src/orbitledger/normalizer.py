"""Normalizers of extraspecial groups in GL(e, p), synthesised from structure.

A generic normalizer backtrack in GL(4, 17) is hopeless (the ambient group
has ~1e13 elements), but the normalizer of <E, scalars> is known to be
generated by the scalar torus, E itself, and one intertwiner per outer
automorphism of E/Z preserving the commutator form (and quadratic type where
there is one).  We enumerate that outer group explicitly, lift each element
to generator images, solve the Schur intertwiner equations, and certify the
assembled group afterwards through its order and conjugation invariants.
"""

from __future__ import annotations

import numpy as np

from .engine import GroupSpec, mulclose
from .errors import BudgetExceeded, InternalError, NotAnAutomorphism, NotInGroup, NotSymplectic, TypeMismatch
from .extraspecial import (FLAVOR_MINUS, FLAVOR_ODD, FLAVOR_PLUS, FLAVOR_SYMPLECTIC,
                           commutator_form, coords_mod_center, primitive_root)
from .fieldmat import FieldMatrix, SingularMatrix, nullspace_basis

OUTER_BUDGET = 1024


def _all_matrices(m, r):
    """All m x m matrices over GF(r) as one (r**(m*m), m, m) stack."""
    count = r ** (m * m)
    idx = np.arange(count)
    digits = np.empty((count, m * m), dtype=np.int64)
    rem = idx.copy()
    for i in range(m * m):
        digits[:, i] = rem % r
        rem //= r
    return digits.reshape(count, m, m)


def symplectic_elements(J, r):
    """All matrices s with s^T J s = J over GF(r), canonically sorted."""
    m = J.shape[0]
    if r ** (m * m) > 1 << 22:
        raise BudgetExceeded(f"outer group Sp({m},{r}) too large to enumerate directly")
    stack = _all_matrices(m, r)
    prod = np.einsum("bji,jk,bkl->bil", stack, J % r, stack) % r
    keep = stack[np.all(prod == J % r, axis=(1, 2))]
    keys = [s.astype(np.uint8).tobytes() for s in keep]
    order = sorted(range(len(keep)), key=lambda i: keys[i])
    return [keep[i] for i in order]


def quad_value(vec, quad, J, r=2):
    """Quadratic form via polarization: Q(v) = sum v_i Q_i + sum_{a<b} v_a v_b B_ab."""
    v = np.asarray(vec) % 2
    total = int(v @ quad)
    m = len(v)
    for a in range(m):
        if not v[a]:
            continue
        for b in range(a + 1, m):
            if v[b]:
                total += int(J[a, b])
    return total % 2


def orthogonal_elements(J, quad, r=2):
    """Subset of the symplectic group preserving the quadratic form."""
    out = []
    for s in symplectic_elements(J, 2):
        if all(quad_value(s[:, j], quad, J) == quad[j] for j in range(J.shape[0])):
            out.append(s)
    return out


def canonical_product(E, alpha):
    """The word X1^a1 Y1^a2 ... in the designated generators, fixed order."""
    out = FieldMatrix.identity(E.p, E.e)
    for g, a in zip(E.gens, np.asarray(alpha, dtype=np.int64) % E.r):
        if a:
            out = out @ g.pow(int(a))
    return out


def lift_outer_auto(E, s, form=None):
    """Generator images realising the outer map s on E/Z.

    Raises NotSymplectic when s breaks the commutator form and TypeMismatch
    when a plus/minus flavor would need a square fixed up (only the
    symplectic-type centre contains an element that can flip squares).
    """
    form = form or commutator_form(E)
    r = E.r
    J = form.matrix % r
    s = np.asarray(s, dtype=np.int64) % r
    if not np.array_equal((s.T @ J @ s) % r, J):
        raise NotSymplectic("outer matrix does not preserve the commutator form")
    images = []
    for j in range(2 * E.k):
        m = canonical_product(E, s[:, j])
        if r == 2:
            want = (E.gens[j] @ E.gens[j]).is_scalar()
            got = (m @ m).is_scalar()
            if want != got:
                if E.flavor == FLAVOR_SYMPLECTIC:
                    m = E.center_gen @ m
                else:
                    raise TypeMismatch(
                        "outer matrix preserves the form but violates the quadratic type")
        images.append(m)
    return images


def solve_intertwiner(E, images):
    """The matrix g with g X_i g^-1 = images[i] for every designated generator.

    Unique up to scalar when the images extend to an automorphism of the
    irreducible E-module; normalised so the first nonzero entry is 1.
    """
    p, e = E.p, E.e
    eye = np.eye(e, dtype=np.int64)
    rows = []
    for gen, img in zip(E.gens, images):
        # g @ gen - img @ g = 0, row-major vectorisation
        rows.append((np.kron(eye, gen.a.T) - np.kron(img.a, eye)) % p)
    system = np.concatenate(rows, axis=0)
    basis = nullspace_basis(system, p)
    if len(basis) != 1:
        raise NotAnAutomorphism(
            f"intertwiner space has dimension {len(basis)}, expected a line")
    g = basis[0].reshape(e, e) % p
    flat = g.reshape(-1)
    lead = flat[np.nonzero(flat)[0][0]]
    g = (g * pow(int(lead), p - 2, p)) % p
    gm = FieldMatrix(p, g, reduce=False)
    try:
        gm.inv()
    except SingularMatrix as exc:
        raise NotAnAutomorphism("intertwiner line consists of singular matrices") from exc
    return gm


class NormalizerSpec:
    """The synthesised normalizer N of <E, scalars> in GL(e, p)."""

    def __init__(self, E, form, scalar_gen, outer_elements, lifts, outer_gen_ids):
        self.E = E
        self.form = form
        self.scalar_gen = scalar_gen
        self.outer_elements = outer_elements    # sorted (2k x 2k) arrays over GF(r)
        self.lifts = lifts                      # index -> FieldMatrix intertwiner
        self.outer_gen_ids = outer_gen_ids
        self._outer_index = {s.astype(np.uint8).tobytes(): i
                             for i, s in enumerate(outer_elements)}

    @property
    def outer_order(self):
        return len(self.outer_elements)

    def base_order(self):
        """Order of <E, scalars>: the centre melts into the torus."""
        return self.E.e**2 * (self.E.p - 1)

    def expected_order(self):
        return self.base_order() * self.outer_order

    def outer_lift(self, s):
        key = (np.asarray(s, dtype=np.int64) % self.E.r).astype(np.uint8).tobytes()
        idx = self._outer_index.get(key)
        if idx is None:
            raise NotInGroup("matrix is not in the outer group")
        return self.lifts[idx]

    def group_spec(self, provenance=None):
        gens = list(self.E.gens) + [self.scalar_gen]
        gens += [self.lifts[i] for i in self.outer_gen_ids]
        tag = provenance or (f"N(E) in GL({self.E.e},{self.E.p}), {self.E.flavor}, "
                             f"outer order {self.outer_order}")
        return GroupSpec(self.E.p, self.E.e, gens, provenance=tag,
                         order_hint=self.expected_order())

    def pullback(self, outer_subgroup_elems, provenance=""):
        """Subgroup of N over <E, scalars> with prescribed outer image.

        outer_subgroup_elems: matrices over GF(r) forming a subgroup of the
        outer group; only a generating subset is actually lifted.
        """
        gens = list(self.E.gens) + [self.scalar_gen]
        seen_ids = []
        for s in outer_subgroup_elems:
            key = (np.asarray(s, dtype=np.int64) % self.E.r).astype(np.uint8).tobytes()
            idx = self._outer_index.get(key)
            if idx is None:
                raise NotInGroup("outer element outside the outer group")
            seen_ids.append(idx)
        for i in sorted(seen_ids):
            gens.append(self.lifts[i])
        return GroupSpec(self.E.p, self.E.e, gens, provenance=provenance,
                         order_hint=self.base_order() * len(outer_subgroup_elems))

    def quotient_group_spec(self):
        """The outer group as a matrix group over GF(r)."""
        r = self.E.r
        gens = [FieldMatrix(r, self.outer_elements[i]) for i in self.outer_gen_ids]
        return GroupSpec(r, 2 * self.E.k, gens,
                         provenance=f"outer group of {self.E.flavor} e={self.E.e}",
                         order_hint=self.outer_order)

    def outer_image_of(self, x):
        """Conjugation action of x on E/Z as a GF(r) matrix; NotInGroup outside N."""
        r = self.E.r
        cols = []
        xinv = x.inv()
        for g in self.E.gens:
            conj = x @ g @ xinv
            try:
                cols.append(coords_mod_center(self.E, self.form, conj))
            except InternalError as exc:
                raise NotInGroup("element does not normalise <E, scalars>") from exc
        return FieldMatrix(r, np.stack(cols, axis=1))


def outer_group_elements(E, form=None):
    """The outer group acting on E/Z, per flavor: Sp(2k, r) or O(+/-)(2k, 2)."""
    form = form or commutator_form(E)
    if E.flavor in (FLAVOR_ODD, FLAVOR_SYMPLECTIC):
        return symplectic_elements(form.matrix, E.r)
    return orthogonal_elements(form.matrix, form.quad, 2)


def _greedy_generators(elements, r):
    """Deterministic small generating set: scan sorted elements, keep growers."""
    mats = [FieldMatrix(r, s) for s in elements]
    target = len(elements)
    gens = []
    have = 1
    chosen = []
    for i, m in enumerate(mats):
        if m.is_identity():
            continue
        trial = gens + [m]
        size = len(mulclose(trial, maxsize=target))
        if size > have:
            gens = trial
            chosen.append(i)
            have = size
            if have == target:
                return chosen
    if have != target:
        raise InternalError("generator scan failed to span the outer group")
    return chosen


def normalizer_generators(E, outer_budget=OUTER_BUDGET):
    """Synthesise N = < scalars, E, one intertwiner per outer generator >.

    Every outer element gets a lift (cached on the spec) so that pullbacks of
    arbitrary outer subgroups need no further factorisation work.
    """
    form = commutator_form(E)
    outer = outer_group_elements(E, form)
    if len(outer) > outer_budget:
        raise BudgetExceeded(
            f"outer group of order {len(outer)} exceeds budget {outer_budget}")
    lifts = {}
    for i, s in enumerate(outer):
        images = lift_outer_auto(E, s, form)
        lifts[i] = solve_intertwiner(E, images)
    gen_ids = _greedy_generators(outer, E.r)
    scalar = FieldMatrix(E.p, primitive_root(E.p) * np.eye(E.e, dtype=np.int64))
    return NormalizerSpec(E, form, scalar, outer, lifts, gen_ids)
