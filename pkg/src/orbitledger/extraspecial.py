"""Extraspecial and symplectic-type r-groups realised inside GL(e, p).

Each group is built from rank-1 blocks by Kronecker products:

* odd r (exponent r):   X = diag(1, w, ..., w^(r-1)), Y = index-shift, with w
  a primitive r-th root of unity in GF(p);
* r = 2 plus block:     X = diag(1, -1), Y = coordinate swap  (dihedral of order 8);
* r = 2 minus block:    X = rotation with X^2 = -1, Y anticommuting involution-like
  element with Y^2 = -1 (quaternion of order 8);
* symplectic type:      plus blocks with the scalar i (i^2 = -1) adjoined to
  the centre, available only when 4 divides p - 1.

The designated generators are X_1, Y_1, ..., X_k, Y_k; the centre is generated
by a scalar matrix by construction.
"""

from __future__ import annotations

import numpy as np

from .engine import GroupSpec, mulclose
from .errors import FlavorUnavailable, InternalError
from .fieldmat import FieldMatrix, kron_many
from . import modprops

FLAVOR_ODD = "odd-exponent-r"
FLAVOR_PLUS = "two-plus-type"
FLAVOR_MINUS = "two-minus-type"
FLAVOR_SYMPLECTIC = "two-symplectic-type"

_TWO_FLAVORS = (FLAVOR_PLUS, FLAVOR_MINUS, FLAVOR_SYMPLECTIC)


class ExtraspecialData:
    """An extraspecial (or symplectic-type) r-group with designated generators."""

    __slots__ = ("r", "k", "flavor", "p", "gens", "center_gen")

    def __init__(self, r, k, flavor, p, gens, center_gen):
        self.r = r
        self.k = k
        self.flavor = flavor
        self.p = p
        self.gens = gens                # [X1, Y1, ..., Xk, Yk]
        self.center_gen = center_gen    # scalar matrix generating Z
        if len(gens) != 2 * k:
            raise InternalError("wrong designated generator count")

    @property
    def e(self):
        return self.r**self.k

    def expected_order(self):
        if self.flavor == FLAVOR_SYMPLECTIC:
            return 2 ** (2 * self.k + 2)
        return self.r ** (2 * self.k + 1)

    def center_order(self):
        return 4 if self.flavor == FLAVOR_SYMPLECTIC else self.r

    def group_spec(self, with_scalar=None, provenance=None):
        gens = list(self.gens) + [self.center_gen]
        if with_scalar is not None:
            gens.append(with_scalar)
        tag = provenance or f"E(r={self.r},k={self.k},{self.flavor}) in GL({self.e},{self.p})"
        return GroupSpec(self.p, self.e, gens, provenance=tag)

    def omega(self):
        """The canonical scalar of order r inside the centre."""
        c = self.center_gen.is_scalar()
        if self.flavor == FLAVOR_SYMPLECTIC:
            return (c * c) % self.p
        return c


def root_of_unity(p, order):
    """Smallest element of multiplicative order exactly `order` in GF(p)*."""
    if (p - 1) % order != 0:
        raise FlavorUnavailable(f"GF({p}) has no element of order {order}")
    for x in range(2, p):
        if pow(x, order, p) == 1 and all(pow(x, order // q, p) != 1
                                         for q in _prime_divisors(order)):
            return x
    raise InternalError("no root of unity found")


def _prime_divisors(m):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def primitive_root(p):
    return root_of_unity(p, p - 1)


def _odd_block(r, p):
    w = root_of_unity(p, r)
    x = np.diag([pow(w, j, p) for j in range(r)]).astype(np.int64)
    y = np.zeros((r, r), dtype=np.int64)
    for j in range(r):
        y[(j - 1) % r, j] = 1
    return FieldMatrix(p, x, reduce=False), FieldMatrix(p, y, reduce=False), w


def _plus_block(p):
    x = FieldMatrix(p, [[1, 0], [0, p - 1]], reduce=False)
    y = FieldMatrix(p, [[0, 1], [1, 0]], reduce=False)
    return x, y


def _minus_block(p):
    x = FieldMatrix(p, [[0, 1], [p - 1, 0]], reduce=False)
    for a in range(p):
        b2 = (-1 - a * a) % p
        for b in range(p):
            if (b * b) % p == b2:
                y = FieldMatrix(p, [[a, b], [b, (-a) % p]])
                return x, y
    raise InternalError("no quaternion block mod %d" % p)


def _embed(block, slot, k, r, p):
    factors = [FieldMatrix.identity(p, r)] * k
    factors[slot] = block
    return kron_many(factors)


def available_flavors(e, p):
    """Flavors of extraspecial groups of width e realisable inside GL(e, p)."""
    r, k = _prime_power(e)
    if r == p:
        return []
    if r == 2:
        if p == 2:
            return []
        flavors = [FLAVOR_PLUS, FLAVOR_MINUS]
        if (p - 1) % 4 == 0:
            flavors.append(FLAVOR_SYMPLECTIC)
        return flavors
    if (p - 1) % r == 0:
        return [FLAVOR_ODD]
    return []


def _prime_power(e):
    for r in _prime_divisors(e):
        k = 0
        m = e
        while m % r == 0:
            m //= r
            k += 1
        if m != 1:
            raise ValueError(f"{e} is not a prime power")
        return r, k
    raise ValueError("e must be > 1")


def build_extraspecial(r, k, flavor, p):
    """Construct the designated-generator presentation inside GL(r**k, p)."""
    if p == r:
        raise FlavorUnavailable("the acting characteristic must differ from r")
    if r == 2:
        if flavor not in _TWO_FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r} for r=2")
        if p % 2 == 0:
            raise FlavorUnavailable("r=2 flavors need odd p")
        if flavor == FLAVOR_SYMPLECTIC and (p - 1) % 4 != 0:
            raise FlavorUnavailable(f"GF({p}) has no fourth root of unity")
    else:
        if flavor != FLAVOR_ODD:
            raise ValueError(f"odd r supports only {FLAVOR_ODD!r}")
        if (p - 1) % r != 0:
            raise FlavorUnavailable(f"GF({p}) has no {r}-th root of unity")

    e = r**k
    gens = []
    if r == 2:
        for slot in range(k):
            if flavor == FLAVOR_MINUS and slot == k - 1:
                bx, by = _minus_block(p)
            else:
                bx, by = _plus_block(p)
            gens.append(_embed(bx, slot, k, 2, p))
            gens.append(_embed(by, slot, k, 2, p))
        if flavor == FLAVOR_SYMPLECTIC:
            i_val = root_of_unity(p, 4)
            center = FieldMatrix(p, i_val * np.eye(e, dtype=np.int64))
        else:
            center = FieldMatrix(p, (p - 1) * np.eye(e, dtype=np.int64))
    else:
        bx, by, w = _odd_block(r, p)
        for slot in range(k):
            gens.append(_embed(bx, slot, k, r, p))
            gens.append(_embed(by, slot, k, r, p))
        center = FieldMatrix(p, w * np.eye(e, dtype=np.int64))
    return ExtraspecialData(r, k, flavor, p, gens, center)


class CommutatorForm:
    """Alternating form on E/Z from commutators, plus r=2 type data."""

    __slots__ = ("r", "matrix", "quad")

    def __init__(self, r, matrix, quad=None):
        self.r = r
        self.matrix = matrix
        self.quad = quad


def _scalar_log(mat, base, p, order):
    c = mat.is_scalar()
    if c is None:
        raise InternalError("commutator is not scalar")
    acc = 1
    for t in range(order):
        if acc == c:
            return t
        acc = (acc * base) % p
    raise InternalError("scalar outside the cyclic centre")


def commutator_form(E):
    """Commutator pairing of the designated generators, as a GF(r) matrix.

    For the plus/minus flavors the squares of the designated generators are
    recorded as the quadratic-form values on the basis of E/Z.
    """
    r, p = E.r, E.p
    omega = E.omega()
    m = len(E.gens)
    J = np.zeros((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            ga, gb = E.gens[a], E.gens[b]
            comm = gb.inv() @ ga.inv() @ gb @ ga
            J[a, b] = _scalar_log(comm, omega, p, r)
    quad = None
    if r == 2 and E.flavor in (FLAVOR_PLUS, FLAVOR_MINUS):
        quad = np.zeros(m, dtype=np.int64)
        for a in range(m):
            sq = (E.gens[a] @ E.gens[a]).is_scalar()
            if sq == 1:
                quad[a] = 0
            elif sq == p - 1:
                quad[a] = 1
            else:
                raise InternalError("generator square escaped the centre")
    return CommutatorForm(r, J % r, quad)


def coords_mod_center(E, form, mat):
    """Coordinates in E/Z of an element of E*scalars, via commutator pairing.

    Pairing mat against every designated generator determines the image in
    E/Z uniquely because the form is nondegenerate; central and scalar parts
    drop out of commutators.
    """
    r, p = E.r, E.p
    omega = E.omega()
    m = len(E.gens)
    vals = np.zeros(m, dtype=np.int64)
    minv = mat.inv()
    for i, gi in enumerate(E.gens):
        comm = gi.inv() @ minv @ gi @ mat
        vals[i] = _scalar_log(comm, omega, p, r)
    # vals_i = sum_a alpha_a J[a, i]; the form is nondegenerate so this solves
    return _solve_square(form.matrix.T % r, vals % r, r)


def _solve_square(a, rhs, p):
    n = a.shape[0]
    aug = np.concatenate([a % p, rhs[:, None] % p], axis=1).astype(np.int64)
    from .fieldmat import _row_echelon
    m, pivots = _row_echelon(aug.copy(), p)
    if pivots != list(range(n)):
        raise InternalError("singular pairing system")
    return m[:n, n]


def verify_extraspecial(E, check_irreducible=True):
    """Diagnostic report; passes iff every structural invariant holds."""
    report = {"flavor": E.flavor, "r": E.r, "k": E.k, "p": E.p, "e": E.e}
    issues = []
    p = E.p
    try:
        elements = mulclose(list(E.gens) + [E.center_gen], maxsize=4 * E.expected_order())
    except Exception as exc:  # closure blow-up means the input is not extraspecial
        report["order"] = None
        report["passed"] = False
        report["issues"] = [f"closure failed: {exc}"]
        return report
    report["order"] = len(elements)
    if len(elements) != E.expected_order():
        issues.append(f"order {len(elements)} != expected {E.expected_order()}")

    center = [x for x in elements if all((x @ y) == (y @ x) for y in E.gens)]
    report["center_order"] = len(center)
    if len(center) != E.center_order():
        issues.append(f"center order {len(center)} != expected {E.center_order()}")
    if any(x.is_scalar() is None for x in center):
        issues.append("center contains a non-scalar matrix")
    if len(center) == len(elements):
        issues.append("group is abelian")

    if E.r % 2 == 1:
        exponent_ok = True
        ident = FieldMatrix.identity(p, E.e)
        for x in elements:
            if x.is_scalar() is not None:
                continue
            if x.pow(E.r) != ident:
                exponent_ok = False
                break
        report["exponent_r"] = exponent_ok
        if not exponent_ok:
            issues.append("a non-central element has order != r")

    if check_irreducible:
        spec = E.group_spec()
        irr = modprops.is_irreducible(spec)
        report["irreducible"] = irr
        if not irr:
            issues.append("action on GF(p)^e is reducible")

    report["issues"] = issues
    report["passed"] = not issues
    return report
