"""Finite p-group engines: dense multiplication tables plus subgroup machinery.

The dense engine covers groups of order up to 3^6 = 729 with a full
multiplication table (element 0 is the identity), which is where subgroup
enumeration, centralizers and module analysis live.  Larger groups fall back
to the permutation engine in :mod:`pgrp.permgrp` with a reduced operation
set.  All values are immutable after construction.
"""

from __future__ import annotations

import numpy as np

from . import permgrp
from .errors import (
    CapacityError,
    EngineUnsupportedError,
    HandleMismatchError,
    IntegrityError,
    PgrpError,
)
from .fplinalg import is_odd_prime

DENSE_CAPACITY = 729


def _closure_mask(mul, gens):
    n = mul.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    gens = [g for g in gens if g]
    if not gens:
        return mask
    garr = np.array(sorted(set(gens)), dtype=np.int64)
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        prods = mul[np.ix_(frontier, garr)].ravel()
        fresh = np.unique(prods[~mask[prods]])
        mask[fresh] = True
        frontier = fresh
    return mask


class DenseGroup:
    """A p-group on indices 0..n-1 given by its full multiplication table."""

    engine = "dense"

    def __init__(self, p, mul, gens=None, name=None, perm_twin=None):
        if not is_odd_prime(p):
            raise PgrpError(f"p must be an odd prime, got {p}")
        mul = np.ascontiguousarray(np.asarray(mul, dtype=np.int64))
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise PgrpError("multiplication table must be square")
        if n > DENSE_CAPACITY:
            raise CapacityError(f"order {n} exceeds the dense capacity {DENSE_CAPACITY}")
        if mul.min() < 0 or mul.max() >= n:
            raise PgrpError("table entries out of range")
        self.p = p
        self.mul = mul
        self.n = n
        self._validate_identity()
        self.inv = self._compute_inverses()
        self._validate_associativity()
        self.ords = self._compute_orders()
        e = 0
        m = n
        while m % p == 0:
            m //= p
            e += 1
        if m != 1:
            raise PgrpError(f"group order {n} is not a power of {p}")
        self.n_exp = e
        mul.setflags(write=False)
        self.inv.setflags(write=False)
        self.ords.setflags(write=False)
        self.gens = list(gens) if gens is not None else self._greedy_gens()
        if not np.all(_closure_mask(mul, self.gens) if self.gens else n == 1):
            raise PgrpError("declared generators do not generate the group")
        self.name = name
        self.perm_twin = perm_twin
        self._cache = {}

    def _validate_identity(self):
        rng = np.arange(self.n)
        if not (np.array_equal(self.mul[0], rng) and np.array_equal(self.mul[:, 0], rng)):
            raise PgrpError("element 0 is not a two-sided identity")

    def _compute_inverses(self):
        rows, cols = np.nonzero(self.mul == 0)
        if not np.array_equal(np.bincount(rows, minlength=self.n), np.ones(self.n, dtype=np.int64)):
            raise PgrpError("inverses are not unique")
        inv = np.zeros(self.n, dtype=np.int64)
        inv[rows] = cols
        if not np.array_equal(self.mul[inv, np.arange(self.n)], np.zeros(self.n, dtype=np.int64)):
            raise PgrpError("left and right inverses disagree")
        return inv

    def _validate_associativity(self):
        mul = self.mul
        if self.n <= 81:
            if not np.array_equal(mul[mul, :], mul[:, mul]):
                raise PgrpError("multiplication table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = (rng.integers(0, self.n, 1000) for _ in range(3))
            if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
                raise PgrpError("multiplication table is not associative")

    def _compute_orders(self):
        n = self.n
        g = np.arange(n)
        cur = g.copy()
        ords = np.zeros(n, dtype=np.int64)
        k = 1
        while True:
            newly = (cur == 0) & (ords == 0)
            ords[newly] = k
            if (ords != 0).all():
                break
            if k > n:
                raise PgrpError("element order exceeds group order")
            cur = self.mul[cur, g]
            k += 1
        for o in np.unique(ords):
            o = int(o)
            while o % self.p == 0:
                o //= self.p
            if o != 1:
                raise PgrpError("an element order is not a power of p")
        return ords

    def _greedy_gens(self):
        gens = []
        mask = _closure_mask(self.mul, gens)
        while not mask.all():
            gens.append(int(np.nonzero(~mask)[0][0]))
            mask = _closure_mask(self.mul, gens)
        return gens

    # -- element helpers -------------------------------------------------
    def op(self, a, b):
        return int(self.mul[a, b])

    def conj(self, x, g):
        """g^-1 x g."""
        return int(self.mul[self.mul[self.inv[g], x], g])

    def comm(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        return int(self.mul[self.mul[self.inv[a], self.inv[b]], self.mul[a, b]])

    def power(self, g, k):
        out, x = 0, int(g)
        k = int(k)
        while k:
            if k & 1:
                out = int(self.mul[out, x])
            x = int(self.mul[x, x])
            k >>= 1
        return out

    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    # -- subgroup constructors -------------------------------------------
    def subgroup(self, elems, gens=None):
        return DenseSubgroup(self, elems, gens=gens)

    def subgroup_from_gens(self, gens):
        mask = _closure_mask(self.mul, gens)
        return DenseSubgroup(self, np.nonzero(mask)[0], gens=[g for g in gens if g])

    def trivial_subgroup(self):
        return DenseSubgroup(self, [0], gens=[])

    def full_subgroup(self):
        return DenseSubgroup(self, np.arange(self.n), gens=self.gens)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"DenseGroup(p={self.p}, order={self.p}^{self.n_exp}{label})"


class DenseSubgroup:
    """A subgroup handle: a sorted element-index set inside a DenseGroup."""

    engine = "dense"

    def __init__(self, parent, elems, gens=None):
        self.parent = parent
        elems = np.unique(np.asarray(elems, dtype=np.int64))
        if elems.size == 0 or elems[0] != 0:
            raise PgrpError("a subgroup must contain the identity")
        self.elems = elems
        elems.setflags(write=False)
        self._set = None
        self._gens = list(gens) if gens is not None else None

    @property
    def order(self):
        return int(self.elems.size)

    def order_exp(self):
        n, e = self.order, 0
        while n > 1:
            n //= self.parent.p
            e += 1
        return e

    @property
    def eset(self):
        if self._set is None:
            self._set = frozenset(int(x) for x in self.elems)
        return self._set

    def key(self):
        return self.elems.tobytes()

    def contains(self, x):
        return int(x) in self.eset

    def contains_sub(self, other):
        self._check(other)
        return other.eset <= self.eset

    def _check(self, other):
        if other.parent is not self.parent:
            raise HandleMismatchError("subgroups of different parent groups")

    def is_trivial(self):
        return self.order == 1

    @property
    def gens(self):
        if self._gens is None:
            mul = self.parent.mul
            gens = []
            mask = _closure_mask(mul, gens)
            inside = np.zeros(self.parent.n, dtype=bool)
            inside[self.elems] = True
            while mask[self.elems].sum() < self.order:
                missing = self.elems[~mask[self.elems]]
                gens.append(int(missing[0]))
                mask = _closure_mask(mul, gens)
            self._gens = gens
        return self._gens

    def is_abelian(self):
        sub = self.parent.mul[np.ix_(self.elems, self.elems)]
        return bool(np.array_equal(sub, sub.T))

    def is_elementary_abelian(self):
        if not self.is_abelian():
            return False
        return bool((self.parent.ords[self.elems] <= self.parent.p).all())

    def rank(self):
        if not self.is_elementary_abelian():
            raise PgrpError("rank is defined for elementary abelian subgroups")
        return self.order_exp()

    def is_normal(self):
        G = self.parent
        for g in G.gens:
            conj = G.mul[G.mul[G.inv[g], self.elems], g]
            if not self.eset.issuperset(int(x) for x in conj):
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, DenseSubgroup)
            and other.parent is self.parent
            and np.array_equal(self.elems, other.elems)
        )

    def __hash__(self):
        return hash((id(self.parent), self.key()))

    def __repr__(self):
        return f"DenseSubgroup(order={self.parent.p}^{self.order_exp()})"


# ---------------------------------------------------------------------------
# group constructors


def cyclic(p, k):
    m = p**k
    if m > DENSE_CAPACITY:
        raise CapacityError(f"cyclic group of order {m} exceeds dense capacity")
    idx = np.arange(m, dtype=np.int64)
    mul = (idx[:, None] + idx[None, :]) % m
    return DenseGroup(p, mul, gens=[1] if m > 1 else [], name=f"C{m}")


def elementary_abelian(p, r):
    m = p**r
    if m > DENSE_CAPACITY:
        raise CapacityError(f"elementary abelian group of order {m} exceeds dense capacity")
    digits = np.zeros((m, r), dtype=np.int64)
    val = np.arange(m)
    for i in range(r):
        digits[:, r - 1 - i] = (val // p**i) % p
    weights = p ** np.arange(r - 1, -1, -1, dtype=np.int64)
    sums = (digits[:, None, :] + digits[None, :, :]) % p
    mul = sums @ weights
    gens = [int(p**i) for i in range(r - 1, -1, -1)]
    return DenseGroup(p, mul, gens=gens, name=f"EA({p},{r})")


def _extraspecial_p3_exponent_p(p):
    # Heisenberg group: triples (a, b, c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')
    n = p**3
    idx = np.arange(n)
    a, b, c = idx // p**2, (idx // p) % p, idx % p
    A = (a[:, None] + a[None, :]) % p
    B = (b[:, None] + b[None, :]) % p
    C = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    mul = A * p**2 + B * p + C
    return DenseGroup(p, mul, gens=[p**2, p], name=f"ES({p},{n},exp {p})")


def _extraspecial_p3_exponent_p2(p):
    # <x, y : x^(p^2) = y^p = 1, y^-1 x y = x^(1+p)>, element (i, j) = x^i y^j
    n = p**3
    p2 = p * p
    idx = np.arange(n)
    i, j = idx // p, idx % p
    shift = np.array([pow(1 + p, int(t), p2) for t in range(p)], dtype=np.int64)
    I = (i[:, None] + i[None, :] * shift[j][:, None]) % p2
    J = (j[:, None] + j[None, :]) % p
    mul = I * p + J
    return DenseGroup(p, mul, gens=[p, 1], name=f"ES({p},{n},exp {p * p})")


def _extraspecial_p5_exponent_p(p):
    n = p**5
    if n > DENSE_CAPACITY:
        raise CapacityError(f"extraspecial group of order {n} exceeds dense capacity")
    idx = np.arange(n)
    a1, b1 = idx // p**4, (idx // p**3) % p
    a2, b2 = (idx // p**2) % p, (idx // p) % p
    c = idx % p
    A1 = (a1[:, None] + a1[None, :]) % p
    B1 = (b1[:, None] + b1[None, :]) % p
    A2 = (a2[:, None] + a2[None, :]) % p
    B2 = (b2[:, None] + b2[None, :]) % p
    C = (c[:, None] + c[None, :] + a1[:, None] * b1[None, :] + a2[:, None] * b2[None, :]) % p
    mul = ((A1 * p + B1) * p**2 + A2 * p + B2) * p + C
    gens = [p**4, p**3, p**2, p]
    return DenseGroup(p, mul, gens=gens, name=f"ES({p},{n},exp {p})")


def _extraspecial_p5_exponent_p2(p):
    # central product of the exponent-p^2 group with the Heisenberg group
    m = _extraspecial_p3_exponent_p2(p)
    h = _extraspecial_p3_exponent_p(p)
    prod = direct_product(m, h)
    z_m = m.power(1, p) * h.n  # (x^p, 1)
    z_h = 1  # (1, (0,0,1))
    anti = prod.subgroup_from_gens([prod.op(z_m, prod.inv[z_h])])
    quot, _ = quotient_group(prod, anti)
    quot.name = f"ES({p},{p**5},exp {p * p})"
    return quot


def extraspecial(p, order, exponent):
    if order == p**3:
        if exponent == p:
            return _extraspecial_p3_exponent_p(p)
        if exponent == p * p:
            return _extraspecial_p3_exponent_p2(p)
    elif order == p**5:
        if exponent == p:
            return _extraspecial_p5_exponent_p(p)
        if exponent == p * p:
            return _extraspecial_p5_exponent_p2(p)
    raise PgrpError(f"extraspecial groups here have order p^3 or p^5 and exponent p or p^2")


def direct_product(a, b):
    if a.engine == "dense" and b.engine == "dense" and a.n * b.n <= DENSE_CAPACITY:
        if a.p != b.p:
            raise PgrpError("direct product requires a common prime")
        na, nb = a.n, b.n
        mul = (a.mul[:, None, :, None] * nb + b.mul[None, :, None, :]).reshape(na * nb, na * nb)
        gens = [g * nb for g in a.gens] + list(b.gens)
        return DenseGroup(a.p, mul, gens=gens, name=f"({a.name}) x ({b.name})")
    pa, pb = as_perm_group(a), as_perm_group(b)
    if pa.p != pb.p:
        raise PgrpError("direct product requires a common prime")
    da = pa.degree
    degree = da + pb.degree
    gens = []
    for g in pa.gens:
        gens.append(permgrp.from_mapping(list(g[:da]) + list(range(da, degree))))
    for g in pb.gens:
        gens.append(permgrp.from_mapping(list(range(da)) + [da + g[x] for x in range(pb.degree)]))
    return permgrp.PermGroup(pa.p, degree, gens, name=f"({a.name}) x ({b.name})")


def as_perm_group(group):
    """A permutation copy: natural twin if present, else the regular action."""
    if group.engine == "perm":
        return group
    if group.perm_twin is not None:
        return group.perm_twin
    if group.n > permgrp.MAX_DEGREE:
        raise CapacityError("regular permutation action exceeds the degree limit")
    gens = [permgrp.from_mapping([int(x) for x in group.mul[:, g]]) for g in group.gens]
    return permgrp.PermGroup(group.p, group.n, gens, name=group.name)


def densify(perm_group, name=None):
    """Enumerate a small permutation group into a dense table."""
    order = perm_group.order
    if order > DENSE_CAPACITY:
        raise CapacityError(f"order {order} exceeds dense capacity")
    ident = permgrp.IDENT
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in perm_group.gens:
                prod = permgrp.compose(e, g)
                if prod not in index:
                    index[prod] = len(elems)
                    elems.append(prod)
                    nxt.append(prod)
        frontier = nxt
    if len(elems) != order:
        raise IntegrityError("enumeration disagrees with the stabilizer chain order")
    mul = np.zeros((order, order), dtype=np.int64)
    for i, e in enumerate(elems):
        for j, f in enumerate(elems):
            mul[i, j] = index[permgrp.compose(e, f)]
    gens = [index[g] for g in perm_group.gens if g != ident]
    return DenseGroup(
        perm_group.p, mul, gens=gens, name=name or perm_group.name, perm_twin=perm_group
    )


def wreath(a, p):
    """Wreath product a wr C_p; selects the permutation engine when large."""
    inner = as_perm_group(a)
    w = permgrp.wreath_perm(inner, p)
    if w.order <= DENSE_CAPACITY:
        return densify(w, name=f"({a.name}) wr C{p}" if a.name else None)
    return w


def quotient_group(G, N):
    """Quotient of a dense group by a normal subgroup; returns (Q, projection)."""
    if G.engine != "dense":
        raise EngineUnsupportedError("quotients require the dense engine")
    if not N.is_normal():
        raise PgrpError("quotient by a non-normal subgroup")
    rep_of = G.mul[:, N.elems].min(axis=1)
    reps = np.unique(rep_of)
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[reps] = np.arange(reps.size)
    qmul = pos[rep_of[G.mul[np.ix_(reps, reps)]]]
    gens = []
    for g in G.gens:
        img = int(pos[rep_of[g]])
        if img and img not in gens:
            gens.append(img)
    Q = DenseGroup(G.p, qmul, gens=gens, name=f"{G.name}/N" if G.name else None)
    return Q, pos[rep_of]


# ---------------------------------------------------------------------------
# generic operations (dense plus permutation engines)


def order_of(group, g):
    if group.engine == "dense":
        return int(group.ords[g])
    return permgrp.perm_order(g if isinstance(g, bytes) else permgrp.from_mapping(g))


def center(G):
    if G.engine != "dense":
        raise EngineUnsupportedError("center requires the dense engine")
    if "center" not in G._cache:
        mask = np.all(G.mul == G.mul.T, axis=1)
        G._cache["center"] = DenseSubgroup(G, np.nonzero(mask)[0])
    return G._cache["center"]


def centralizer(G, X):
    if G.engine != "dense":
        raise EngineUnsupportedError("centralizer requires the dense engine")
    if X.parent is not G:
        raise HandleMismatchError("subgroup belongs to a different group")
    gens = X.gens if X.gens else []
    if not gens:
        return G.full_subgroup()
    garr = np.array(gens, dtype=np.int64)
    mask = np.all(G.mul[:, garr] == G.mul[garr, :].T, axis=1)
    return DenseSubgroup(G, np.nonzero(mask)[0])


def normal_closure(group, X):
    if group.engine == "perm":
        gens = X.gens if hasattr(X, "gens") else list(X)
        return permgrp.normal_closure_perm(group, gens)
    gens = list(X.gens) if isinstance(X, DenseSubgroup) else [int(x) for x in X]
    mask = _closure_mask(group.mul, gens)
    kept = [g for g in gens if g]
    queue = list(kept)
    while queue:
        x = queue.pop()
        for g in group.gens:
            c = group.conj(x, g)
            if not mask[c]:
                kept.append(c)
                queue.append(c)
                mask = _closure_mask(group.mul, kept)
    return DenseSubgroup(group, np.nonzero(mask)[0], gens=kept)


def omega1(X):
    """Subgroup generated by the elements of order dividing p."""
    if X.engine != "dense":
        raise EngineUnsupportedError("omega_1 requires the dense engine")
    G = X.parent
    small = X.elems[G.ords[X.elems] <= G.p]
    gens = [int(x) for x in small if x]
    mask = _closure_mask(G.mul, gens)
    return DenseSubgroup(G, np.nonzero(mask)[0], gens=gens)


def commutator_subgroup(A, B):
    """Subgroup generated by all [a, b] with a in A, b in B."""
    if A.engine == "perm":
        return permgrp.commutator_subgroup_perm(A.parent, A, B)
    G = A.parent
    if B.parent is not G:
        raise HandleMismatchError("subgroups of different parent groups")
    left = G.mul[np.ix_(G.inv[A.elems], G.inv[B.elems])]
    right = G.mul[np.ix_(A.elems, B.elems)]
    vals = np.unique(G.mul[left, right])
    gens = [int(v) for v in vals if v]
    mask = _closure_mask(G.mul, gens)
    return DenseSubgroup(G, np.nonzero(mask)[0], gens=gens)


def iterated_commutator(A, B, k):
    """Left-nested [A, B; k] = [[A, B; k-1], B]."""
    if k < 1:
        raise PgrpError("iterated commutators need k >= 1")
    T = commutator_subgroup(A, B)
    for _ in range(k - 1):
        T = commutator_subgroup(T, B)
    return T


def lower_central_series(group):
    """Terms G = K_1 >= K_2 >= ... >= 1 with K_{r+1} = [K_r, G]."""
    if group.engine == "perm":
        return permgrp.lower_central_series_perm(group)
    if "lcs" in group._cache:
        return group._cache["lcs"]
    terms = [group.full_subgroup()]
    while terms[-1].order > 1:
        nxt = commutator_subgroup(terms[-1], terms[0])
        if nxt.order == terms[-1].order:
            raise IntegrityError("lower central series did not reach 1")
        terms.append(nxt)
    group._cache["lcs"] = terms
    return terms


def upper_central_series(group):
    """Ascending terms 1 = Z_0 <= Z_1 <= ... <= Z_c = G."""
    if group.engine != "dense":
        raise EngineUnsupportedError("the upper central series requires the dense engine")
    if "ucs" in group._cache:
        return group._cache["ucs"]
    terms = [group.trivial_subgroup()]
    garr = np.array(group.gens, dtype=np.int64) if group.gens else np.zeros(0, dtype=np.int64)
    all_elems = np.arange(group.n)
    while terms[-1].order < group.n:
        member = np.zeros(group.n, dtype=bool)
        member[terms[-1].elems] = True
        if garr.size:
            left = group.mul[np.ix_(group.inv[all_elems], group.inv[garr])]
            right = group.mul[np.ix_(all_elems, garr)]
            comm = group.mul[left, right]
            mask = member[comm].all(axis=1)
        else:
            mask = np.ones(group.n, dtype=bool)
        nxt = DenseSubgroup(group, np.nonzero(mask)[0])
        if nxt.order == terms[-1].order:
            raise IntegrityError("upper central series did not reach the whole group")
        terms.append(nxt)
    group._cache["ucs"] = terms
    return terms


def nilpotency_class(group):
    return len(lower_central_series(group)) - 1


def derived_series(group):
    if group.engine == "perm":
        return permgrp.derived_series_perm(group)
    terms = [group.full_subgroup()]
    while terms[-1].order > 1:
        nxt = commutator_subgroup(terms[-1], terms[-1])
        if nxt.order == terms[-1].order:
            raise IntegrityError("derived series did not reach 1")
        terms.append(nxt)
    return terms


def derived_subgroup(group):
    return derived_series(group)[1] if not _is_trivial_group(group) else _full(group)


def _is_trivial_group(group):
    return (group.n if group.engine == "dense" else group.order) == 1


def _full(group):
    return group.full_subgroup()


def is_metabelian(group):
    return len(derived_series(group)) <= 3


def is_maximal_class(group):
    return nilpotency_class(group) == group.n_exp - 1


def subgroup_nilpotency_class(sub):
    """Nilpotency class of a subgroup viewed as a group in its own right."""
    if sub.engine == "perm":
        return permgrp.subgroup_nilpotency_class_perm(sub)
    G = sub.parent
    terms = [sub]
    while terms[-1].order > 1:
        nxt = commutator_subgroup(terms[-1], terms[0])
        if nxt.order == terms[-1].order:
            raise IntegrityError("lower central series did not reach 1")
        terms.append(nxt)
    return len(terms) - 1


def normal_subgroups(G):
    """All normal subgroups, as the join closure of cyclic normal closures."""
    if G.engine != "dense":
        raise CapacityError("normal subgroup enumeration requires the dense engine")
    if "normal_subgroups" in G._cache:
        return G._cache["normal_subgroups"]
    atoms = {}
    for x in range(1, G.n):
        nc = normal_closure(G, [x])
        atoms.setdefault(nc.key(), nc)
    atom_list = [atoms[k] for k in sorted(atoms)]
    triv = G.trivial_subgroup()
    known = {triv.key(): triv}
    frontier = [triv]
    while frontier:
        nxt = []
        for S in frontier:
            for A in atom_list:
                if A.eset <= S.eset:
                    continue
                mask = _closure_mask(G.mul, list(S.gens) + list(A.gens))
                J = DenseSubgroup(G, np.nonzero(mask)[0])
                if J.key() not in known:
                    known[J.key()] = J
                    nxt.append(J)
        frontier = nxt
    out = sorted(known.values(), key=lambda s: (s.order, tuple(s.elems)))
    G._cache["normal_subgroups"] = out
    return out


def elementary_abelian_subgroups(G):
    """The poset of non-trivial elementary abelian subgroups, by extension search."""
    if G.engine != "dense":
        raise EngineUnsupportedError("elementary abelian enumeration requires the dense engine")
    if "ea_poset" in G._cache:
        return G._cache["ea_poset"]
    p = G.p
    ones = np.nonzero(G.ords == p)[0]
    found = {}
    level = []
    for x in ones:
        powers = np.array(sorted(int(G.power(x, j)) for j in range(p)), dtype=np.int64)
        S = DenseSubgroup(G, powers, gens=[int(x)])
        if S.key() not in found:
            found[S.key()] = S
            level.append(S)
    while level:
        nxt = []
        for E in level:
            if ones.size:
                comm_left = G.mul[np.ix_(ones, E.elems)]
                comm_right = G.mul[np.ix_(E.elems, ones)].T
                commuting = np.all(comm_left == comm_right, axis=1)
            else:
                commuting = np.zeros(0, dtype=bool)
            for x in ones[commuting]:
                x = int(x)
                if x in E.eset:
                    continue
                xs = np.array([G.power(x, j) for j in range(p)], dtype=np.int64)
                elems = np.unique(G.mul[np.ix_(E.elems, xs)].ravel())
                S = DenseSubgroup(G, elems, gens=list(E.gens) + [x])
                if S.key() not in found:
                    found[S.key()] = S
                    nxt.append(S)
        level = nxt
    out = sorted(found.values(), key=lambda s: (s.order, tuple(s.elems)))
    G._cache["ea_poset"] = out
    return out


def p_rank(G):
    """Largest rank of an elementary abelian subgroup."""
    if G.engine != "dense":
        raise EngineUnsupportedError("exact p-rank requires the dense engine")
    if _is_trivial_group(G):
        return 0
    poset = elementary_abelian_subgroups(G)
    return max(s.order_exp() for s in poset) if poset else 0


def rank_witness(G, r, candidate_gens=None):
    """A verified elementary abelian subgroup of rank r, or None.

    On the dense engine the poset is searched; on the permutation engine a
    candidate generator list must be supplied and is checked for order p,
    commutativity and independence.
    """
    if G.engine == "dense":
        for s in elementary_abelian_subgroups(G):
            if s.order_exp() == r:
                return s
        return None
    if candidate_gens is None:
        raise EngineUnsupportedError(
            "the permutation engine verifies a supplied candidate generator set"
        )
    sub = permgrp.verify_rank_witness(G, candidate_gens)
    if sub is not None and sub.order_exp() != r:
        return None
    return sub
