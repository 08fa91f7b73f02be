"""Generic finite matrix-group machinery over the natural action on vector indices.

A GroupSpec is a matrix group given by invertible generators over GF(p).
BSGSIndex is a base / strong-generating-set structure on the faithful action
on vector indices, supporting order, membership, solvability, normal closure
and element streaming.  Small groups can additionally be flattened into an
AbstractGroup (indexed elements plus multiplication), which powers the
cyclic-extension enumeration of solvable subgroup classes.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np

from .errors import BudgetExceeded, InternalError
from .fieldmat import FieldMatrix, mat_inv, powers

DEFAULT_POINT_BUDGET = 10**7
DEFAULT_ELEMENT_BUDGET = 10**7
DEFAULT_LATTICE_BUDGET = 10**4

_MC_ROUNDS_WITHOUT_PROGRESS = 24


class GroupSpec:
    """A matrix group over GF(p) given by generators, with provenance tag."""

    __slots__ = ("p", "n", "generators", "provenance", "order_hint", "_bsgs")

    def __init__(self, p, n, generators, provenance="", order_hint=None):
        self.p = int(p)
        self.n = int(n)
        gens = []
        for g in generators:
            if not isinstance(g, FieldMatrix):
                g = FieldMatrix(p, g)
            if g.p != self.p or g.a.shape != (self.n, self.n):
                raise ValueError("generator has wrong field or dimension")
            mat_inv(g)  # raises SingularMatrix for non-invertible input
            gens.append(g)
        self.generators = tuple(gens)
        self.provenance = provenance
        self.order_hint = order_hint
        self._bsgs = None

    def digest(self):
        h = hashlib.sha256()
        h.update(f"{self.p} {self.n} {len(self.generators)}".encode())
        for g in self.generators:
            h.update(g.key()[2])
        return h.hexdigest()

    def __repr__(self):
        tag = f", {self.provenance!r}" if self.provenance else ""
        return f"GroupSpec(p={self.p}, n={self.n}, gens={len(self.generators)}{tag})"


def mulclose(gens, maxsize=None):
    """Multiplicative closure of a list of FieldMatrix, BFS order.

    Returns the full element list; raises BudgetExceeded past maxsize.
    """
    if not gens:
        raise ValueError("need at least one generator")
    p, n = gens[0].p, gens[0].n
    idmat = FieldMatrix.identity(p, n)
    seen = {idmat.key(): idmat}
    frontier = [idmat]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x @ g
                k = y.key()
                if k not in seen:
                    seen[k] = y
                    new.append(y)
                    if maxsize is not None and len(seen) > maxsize:
                        raise BudgetExceeded(f"closure exceeds {maxsize} elements")
        frontier = new
    return list(seen.values())


class _Level:
    """One stabilizer-chain level: base point, orbit and packed transversal."""

    __slots__ = ("point", "vec", "orbit_index", "points", "inv_packed", "gen_ids", "done_pairs")

    def __init__(self, point, vec, n):
        self.point = point
        self.vec = vec
        self.points = [point]
        self.orbit_index = {point: 0}
        self.inv_packed = [np.eye(n, dtype=np.uint8).tobytes()]
        self.gen_ids = []      # indices into BSGSIndex.strong_gens usable at this level
        self.done_pairs = set()  # (slot, gen_id) Schreier pairs already sifted


class BSGSIndex:
    """Base and strong generating set for a matrix group acting on vector indices."""

    def __init__(self, p, n):
        self.p = p
        self.n = n
        self.levels = []
        self.strong_gens = []      # list of (mat int64 ndarray, inv ndarray)
        self._pows = powers(p, n)
        self.verified = False

    # -- primitive point action -------------------------------------------
    def _encode(self, vec):
        return int(vec @ self._pows)

    def act(self, mat, vec):
        return (mat @ vec) % self.p

    # -- structure ----------------------------------------------------------
    @property
    def base(self):
        return [lv.point for lv in self.levels]

    def order(self):
        o = 1
        for lv in self.levels:
            o *= len(lv.points)
        return o

    def _unpack(self, packed):
        return np.frombuffer(packed, dtype=np.uint8).reshape(self.n, self.n).astype(np.int64)

    def _first_moved_point(self, mat):
        """Smallest moved vector index; unit vectors are tried first."""
        for i in range(self.n):
            vec = np.zeros(self.n, dtype=np.int64)
            vec[i] = 1
            img = self.act(mat, vec)
            if img[i] != 1 or np.count_nonzero(img) != 1:
                return self._encode(vec), vec
        # non-identity matrices always move some unit vector
        raise InternalError("identity passed to _first_moved_point")

    def _extend_orbit(self, level_idx, new_gen_ids=None):
        """Close the orbit at one level under its generators (BFS, deterministic)."""
        lv = self.levels[level_idx]
        gen_ids = new_gen_ids if new_gen_ids is not None else lv.gen_ids
        if not gen_ids:
            return
        queue = list(range(len(lv.points)))
        first = True
        while queue:
            next_queue = []
            ids = gen_ids if first else lv.gen_ids
            for slot in queue:
                pt_vec = None
                for gid in ids:
                    mat, matinv = self.strong_gens[gid]
                    if pt_vec is None:
                        pt_vec = self._decode_point(lv.points[slot])
                    img_vec = self.act(mat, pt_vec)
                    img = self._encode(img_vec)
                    if img not in lv.orbit_index:
                        lv.orbit_index[img] = len(lv.points)
                        lv.points.append(img)
                        # i_new = i_old @ g^-1 maps the new point back to the base
                        inv_here = (self._unpack(lv.inv_packed[slot]) @ matinv) % self.p
                        lv.inv_packed.append(inv_here.astype(np.uint8).tobytes())
                        next_queue.append(len(lv.points) - 1)
            queue = next_queue
            first = False

    def _decode_point(self, point):
        v = np.empty(self.n, dtype=np.int64)
        rem = point
        for i in range(self.n):
            rem, d = divmod(rem, self.p)
            v[i] = d
        return v

    def depth_of(self, mat):
        """Number of leading base points fixed by mat."""
        d = 0
        for lv in self.levels:
            if self._encode(self.act(mat, lv.vec)) != lv.point:
                break
            d += 1
        return d

    def sift(self, mat):
        """Return (residue, level) after dividing out transversal elements.

        residue is the identity iff mat factorises over the current chain;
        level is the first chain position where sifting got stuck (or
        len(levels) on success).
        """
        x = np.mod(mat, self.p) if not isinstance(mat, FieldMatrix) else mat.a % self.p
        for i, lv in enumerate(self.levels):
            img = self._encode(self.act(x, lv.vec))
            slot = lv.orbit_index.get(img)
            if slot is None:
                return x, i
            x = (self._unpack(lv.inv_packed[slot]) @ x) % self.p
        return x, len(self.levels)

    def contains_mat(self, mat):
        res, _ = self.sift(mat)
        return np.array_equal(res, np.eye(self.n, dtype=np.int64))

    def _add_strong_gen(self, mat):
        """Install a new strong generator and extend every affected orbit."""
        mat = mat % self.p
        inv = mat_inv(FieldMatrix(self.p, mat, reduce=False)).a
        gid = len(self.strong_gens)
        self.strong_gens.append((mat, inv))
        depth = self.depth_of(mat)
        if depth == len(self.levels):
            point, vec = self._first_moved_point(mat)
            self.levels.append(_Level(point, vec, self.n))
        for i in range(0, depth + 1):
            if i < len(self.levels):
                self.levels[i].gen_ids.append(gid)
                self._extend_orbit(i, new_gen_ids=[gid])

    def add_element(self, mat):
        """Sift an element; install the residue if it is new. Returns True if grown."""
        res, _ = self.sift(mat)
        if np.array_equal(res, np.eye(self.n, dtype=np.int64)):
            return False
        self._add_strong_gen(res)
        return True

    def transversal_matrix(self, level_idx, slot):
        """Forward transversal element mapping the base point to orbit slot."""
        inv = self._unpack(self.levels[level_idx].inv_packed[slot])
        return mat_inv(FieldMatrix(self.p, inv, reduce=False)).a

    def schreier_verify(self):
        """Sift every unprocessed Schreier generator; returns True if complete.

        Installs any non-trivial residue it finds (so repeated calls converge
        to a verified chain).
        """
        grew = False
        for li in range(len(self.levels) - 1, -1, -1):
            lv = self.levels[li]
            slot = 0
            while slot < len(lv.points):
                for gid in list(lv.gen_ids):
                    if (slot, gid) in lv.done_pairs:
                        continue
                    lv.done_pairs.add((slot, gid))
                    mat, _ = self.strong_gens[gid]
                    t = self.transversal_matrix(li, slot)
                    moved = (mat @ t) % self.p
                    img = self._encode(self.act(moved, lv.vec))
                    tslot = lv.orbit_index[img]
                    s = (self._unpack(lv.inv_packed[tslot]) @ moved) % self.p
                    if self.add_element(s):
                        grew = True
                slot += 1
        return not grew

    def element_count_stream(self):
        """Yield every group element exactly once as an int64 ndarray."""
        fwd = []
        for li, lv in enumerate(self.levels):
            order_slots = sorted(range(len(lv.points)), key=lambda s: lv.points[s])
            mats = np.stack([self.transversal_matrix(li, s) for s in order_slots])
            fwd.append(mats)

        def rec(level_idx, prefix):
            if level_idx == len(fwd):
                yield prefix
                return
            for t in fwd[level_idx]:
                yield from rec(level_idx + 1, (prefix @ t) % self.p)

        if not self.levels:
            yield np.eye(self.n, dtype=np.int64)
            return
        yield from rec(0, np.eye(self.n, dtype=np.int64))


def _seeded_rng(g, extra=""):
    h = hashlib.sha256((g.digest() + extra).encode())
    return random.Random(int.from_bytes(h.digest()[:8], "big"))


class _ProductReplacer:
    """Deterministic product-replacement sampler over a generator list."""

    def __init__(self, gens, rng, slots=8, burn=40):
        p, n = gens[0].p, gens[0].n
        pool = [g.a.copy() for g in gens]
        while len(pool) < slots:
            pool.append(pool[len(pool) % len(gens)].copy())
        self.pool = pool
        self.p = p
        self.rng = rng
        self.acc = np.eye(n, dtype=np.int64)
        for _ in range(burn):
            self.sample()

    def sample(self):
        i = self.rng.randrange(len(self.pool))
        j = self.rng.randrange(len(self.pool))
        if i == j:
            j = (j + 1) % len(self.pool)
        self.pool[i] = (self.pool[i] @ self.pool[j]) % self.p
        self.acc = (self.acc @ self.pool[i]) % self.p
        return self.acc


def bsgs_build(g, point_budget=DEFAULT_POINT_BUDGET):
    """Build a BSGS for g on the action on vector indices.

    Deterministic for a fixed generator list: the randomised speed-up phase
    is seeded from the generator digest.  When g.order_hint is set the build
    stops as soon as the transversal product certifies that order; otherwise
    the chain is completed by deterministic Schreier-generator verification.
    """
    if g._bsgs is not None:
        return g._bsgs
    if g.p ** g.n > point_budget:
        raise BudgetExceeded(
            f"{g.p}**{g.n} points exceed the point budget {point_budget}")
    idx = BSGSIndex(g.p, g.n)
    for gen in g.generators:
        idx.add_element(gen.a)

    target = g.order_hint
    if idx.levels:
        sampler = _ProductReplacer(list(g.generators), _seeded_rng(g))
        stale = 0
        while stale < _MC_ROUNDS_WITHOUT_PROGRESS:
            if target is not None and idx.order() >= target:
                break
            if idx.add_element(sampler.sample()):
                stale = 0
            else:
                stale += 1

    if target is not None:
        if idx.order() != target:
            # fall back to full verification before declaring a mismatch
            while not idx.schreier_verify():
                pass
            if idx.order() != target:
                raise InternalError(
                    f"BSGS order {idx.order()} does not match expected {target}")
        idx.verified = True
    else:
        while not idx.schreier_verify():
            pass
        idx.verified = True
    g._bsgs = idx
    return idx


def group_order(g, point_budget=DEFAULT_POINT_BUDGET):
    return bsgs_build(g, point_budget).order()


def contains(idx, x):
    """Membership test: true iff x sifts to the identity."""
    if isinstance(x, FieldMatrix):
        if x.p != idx.p or x.a.shape != (idx.n, idx.n):
            raise ValueError("element has wrong field or dimension")
        x = x.a
    return idx.contains_mat(x)


def elements_stream(idx, element_budget=DEFAULT_ELEMENT_BUDGET):
    """Stream the group elements exactly once each, as FieldMatrix."""
    if idx.order() > element_budget:
        raise BudgetExceeded(
            f"order {idx.order()} exceeds element budget {element_budget}")
    for m in idx.element_count_stream():
        yield FieldMatrix(idx.p, m, reduce=False)


def elements_array_stream(idx, chunk=4096, element_budget=DEFAULT_ELEMENT_BUDGET):
    """Stream elements in (B, n, n) stacks; used by the fixed-point oracle."""
    if idx.order() > element_budget:
        raise BudgetExceeded(
            f"order {idx.order()} exceeds element budget {element_budget}")
    buf = []
    for m in idx.element_count_stream():
        buf.append(m)
        if len(buf) == chunk:
            yield np.stack(buf)
            buf = []
    if buf:
        yield np.stack(buf)


def normal_closure(g, seeds, point_budget=DEFAULT_POINT_BUDGET):
    """Smallest normal subgroup of <g> containing the seed matrices."""
    p, n = g.p, g.n
    ident = np.eye(n, dtype=np.int64)
    idx = BSGSIndex(p, n)
    closure_gens = []
    queue = []
    for s in seeds:
        arr = s.a % p if isinstance(s, FieldMatrix) else np.mod(s, p)
        if np.array_equal(arr, ident):
            continue
        if idx.add_element(arr):
            closure_gens.append(arr)
            queue.append(arr)
    conjugators = []
    for c in g.generators:
        conjugators.append((c.a, mat_inv(c).a))
    while queue:
        s = queue.pop(0)
        for c, cinv in conjugators:
            conj = (c @ s @ cinv) % p
            if idx.add_element(conj):
                closure_gens.append(conj)
                queue.append(conj)
    while not idx.schreier_verify():
        pass
    idx.verified = True
    if not closure_gens:
        closure_gens = [ident]
    out = GroupSpec(p, n, [FieldMatrix(p, m, reduce=False) for m in closure_gens],
                    provenance=f"normal closure in {g.provenance or 'group'}")
    out._bsgs = idx
    return out


def derived_subgroup(g, point_budget=DEFAULT_POINT_BUDGET):
    seeds = []
    gens = list(g.generators)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            a, b = gens[i], gens[j]
            comm = mat_inv(a) @ mat_inv(b) @ a @ b
            seeds.append(comm)
    if not seeds:
        return GroupSpec(g.p, g.n, [FieldMatrix.identity(g.p, g.n)], provenance="trivial")
    return normal_closure(g, seeds, point_budget)


def is_solvable(g, point_budget=DEFAULT_POINT_BUDGET, max_steps=64):
    """Derived series test: solvable iff the series reaches the trivial group."""
    current = g
    order = group_order(current, point_budget)
    for _ in range(max_steps):
        if order == 1:
            return True
        nxt = derived_subgroup(current, point_budget)
        nxt_order = group_order(nxt, point_budget)
        if nxt_order == order:
            return False
        current, order = nxt, nxt_order
    raise InternalError("derived series did not terminate")


# ---------------------------------------------------------------------------
# Abstract (indexed) small groups and the subgroup-class lattice.

_CAYLEY_CAP = 4096


class AbstractGroup:
    """A small finite group flattened to indices 0..m-1 with a Cayley table.

    Elements are canonically sorted by their packed matrix representation, so
    identical inputs index identically across runs.
    """

    def __init__(self, elements, p):
        elements = sorted(elements, key=lambda e: e.key())
        self.elements = elements
        self.p = p
        self.m = len(elements)
        self.index = {e.key(): i for i, e in enumerate(elements)}
        if self.m <= _CAYLEY_CAP:
            stack = np.stack([e.a for e in elements])
            table = np.empty((self.m, self.m), dtype=np.int32)
            for i, e in enumerate(elements):
                prods = np.mod(e.a[None, :, :] @ stack, p)
                table[i] = [self.index[(p, e.a.shape, row.astype(np.uint8).tobytes())]
                            for row in prods]
            self.table = table
        else:
            self.table = None
            self._row_cache = {}
        ident = FieldMatrix.identity(p, elements[0].n)
        self.id = self.index[ident.key()]
        self.inv = np.array([self.index[mat_inv(e).key()] for e in elements],
                            dtype=np.int32)

    @classmethod
    def from_spec(cls, g, lattice_budget=DEFAULT_LATTICE_BUDGET):
        elems = mulclose(list(g.generators), maxsize=lattice_budget)
        return cls(elems, g.p)

    def _row(self, i):
        if self.table is not None:
            return self.table[i]
        row = self._row_cache.get(i)
        if row is None:
            e = self.elements[i]
            shape = e.a.shape
            prods = np.mod(e.a[None, :, :] @ np.stack([x.a for x in self.elements]), self.p)
            row = np.array([self.index[(self.p, shape, r.astype(np.uint8).tobytes())]
                            for r in prods], dtype=np.int32)
            self._row_cache[i] = row
        return row

    def mult(self, i, j):
        return int(self._row(i)[j])

    def mult_set(self, i, subset):
        """i * each element of subset (array-valued)."""
        return self._row(i)[np.asarray(sorted(subset), dtype=np.int64)]

    def conjugate_set(self, subset, gidx):
        """Image of a subgroup under conjugation: {g s g^-1}."""
        arr = np.asarray(sorted(subset), dtype=np.int64)
        ginv = int(self.inv[gidx])
        if self.table is not None:
            return frozenset(self.table[self._row(gidx)[arr], ginv].tolist())
        out = [self.mult(int(x), ginv) for x in self._row(gidx)[arr]]
        return frozenset(out)

    def element_order(self, i):
        o = 1
        x = i
        while x != self.id:
            x = self.mult(x, i)
            o += 1
        return o

    def closure(self, subset):
        seen = set(subset) | {self.id}
        frontier = list(seen)
        while frontier:
            new = []
            for x in frontier:
                for gidx in subset:
                    y = self.mult(x, gidx)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return frozenset(seen)

    def power(self, i, k):
        x = self.id
        for _ in range(k):
            x = self.mult(x, i)
        return x

    def subgroup_is_normal(self, subset):
        s = frozenset(subset)
        return all(self.conjugate_set(s, gi) == s for gi in range(self.m))

    def derived_of(self, subset):
        elems = sorted(subset)
        comms = set()
        for a in elems:
            ia = int(self.inv[a])
            for b in elems:
                c = self.mult(self.mult(ia, int(self.inv[b])), self.mult(a, b))
                comms.add(c)
        return self.closure(comms)

    def is_solvable_subset(self, subset):
        cur = frozenset(subset)
        while len(cur) > 1:
            nxt = self.derived_of(cur)
            if nxt == cur:
                return False
            cur = nxt
        return True

    def derived_series_of(self, subset):
        series = [frozenset(subset)]
        while len(series[-1]) > 1:
            nxt = self.derived_of(series[-1])
            if nxt == series[-1]:
                break
            series.append(nxt)
        return series

    def minimal_generators(self, subset):
        """Greedy small generating set for a subgroup (deterministic)."""
        target = frozenset(subset)
        gens = []
        have = frozenset([self.id])
        for x in sorted(target):
            if x in have:
                continue
            gens.append(x)
            have = self.closure(gens)
            if have == target:
                return gens
        if have != target:
            raise InternalError("generator search failed")
        return gens


class SubgroupClass:
    """One conjugacy class of subgroups: rep, size, order, lattice parents."""

    __slots__ = ("rep", "order", "class_size", "parents", "class_id")

    def __init__(self, rep, order, class_size, class_id):
        self.rep = rep
        self.order = order
        self.class_size = class_size
        self.class_id = class_id
        self.parents = set()   # class ids of proper subgroups used to build this one


def _prime_factors(m):
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


def subgroup_classes_abstract(G, solvable_only=True):
    """All conjugacy classes of solvable subgroups via cyclic extensions.

    Every solvable subgroup has a normal subgroup of prime index, so walking
    upward by prime-order cyclic extensions from the trivial group reaches a
    conjugate of each one.  Classes are deduplicated by expanding the full
    conjugate set.  With solvable_only=False the result is the full subgroup
    lattice when G itself is solvable; non-solvable G is refused because the
    method cannot reach perfect subgroups.
    """
    if not solvable_only and not G.is_solvable_subset(range(G.m)):
        raise BudgetExceeded(
            "full lattice of a non-solvable group is out of scope; "
            "only solvable classes are enumerated")
    primes = _prime_factors(G.m)
    trivial = frozenset([G.id])
    classes = [SubgroupClass(trivial, 1, 1, 0)]
    seen = {trivial: 0}
    layer = [0]
    while layer:
        next_layer = []
        for cid in layer:
            H = classes[cid].rep
            h = len(H)
            norm = [x for x in range(G.m)
                    if x not in H and G.conjugate_set(H, x) == H]
            for q in primes:
                if (G.m // h) % q != 0:
                    continue
                for x in norm:
                    if G.power(x, q) not in H:
                        continue
                    K = set(H)
                    coset = list(H)
                    for _ in range(q - 1):
                        coset = [G.mult(x, c) for c in coset]
                        K.update(coset)
                    K = frozenset(K)
                    known = seen.get(K)
                    if known is not None:
                        classes[known].parents.add(cid)
                        continue
                    new_id = len(classes)
                    conjugates = {K}
                    for gi in range(G.m):
                        conjugates.add(G.conjugate_set(K, gi))
                    for c in conjugates:
                        seen[c] = new_id
                    cls = SubgroupClass(K, len(K), len(conjugates), new_id)
                    cls.parents.add(cid)
                    classes.append(cls)
                    next_layer.append(new_id)
        layer = next_layer
    classes.sort(key=lambda c: (c.order, tuple(sorted(c.rep))))
    remap = {c.class_id: i for i, c in enumerate(classes)}
    for i, c in enumerate(classes):
        c.parents = {remap[x] for x in c.parents}
        c.class_id = i
    return classes


def subgroup_classes(g, solvable_only=True, lattice_budget=DEFAULT_LATTICE_BUDGET):
    """Conjugacy classes of (solvable) subgroups of a small matrix group.

    Returns (AbstractGroup, [SubgroupClass]); class reps convert back to
    GroupSpecs via `class_to_spec`.
    """
    G = AbstractGroup.from_spec(g, lattice_budget)
    if G.m > lattice_budget:
        raise BudgetExceeded(f"group order {G.m} exceeds lattice budget {lattice_budget}")
    return G, subgroup_classes_abstract(G, solvable_only=solvable_only)


def class_to_spec(G, cls_or_subset, p=None, provenance=""):
    subset = cls_or_subset.rep if isinstance(cls_or_subset, SubgroupClass) else cls_or_subset
    gens = [G.elements[i] for i in G.minimal_generators(subset)]
    if not gens:
        gens = [G.elements[G.id]]
    n = gens[0].n
    return GroupSpec(G.p if p is None else p, n, gens,
                     provenance=provenance, order_hint=len(subset))
