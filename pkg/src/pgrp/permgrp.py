"""Permutation engine: stabilizer chains for p-groups of moderate degree.

Permutations are stored as 256-byte lookup tables so that composition is a
single ``bytes.translate`` call; a permutation of degree d fixes all points
``d..255``.  The chain is a deterministic Schreier-Sims structure, which is
ample at the orders this package targets (a few million elements).
"""

from __future__ import annotations

from .errors import CapacityError, GroupFileError, IntegrityError, PgrpError

MAX_DEGREE = 256

IDENT = bytes(range(256))


def compose(a, b):
    """Apply ``a`` first, then ``b``."""
    return a.translate(b)


def inverse(a):
    out = bytearray(256)
    for x, y in enumerate(a):
        out[y] = x
    return bytes(out)


def from_mapping(images):
    """Permutation from a point map on 0..d-1."""
    d = len(images)
    if d > MAX_DEGREE:
        raise CapacityError(f"degree {d} exceeds the permutation engine limit")
    if sorted(images) != list(range(d)):
        raise PgrpError("not a permutation")
    return bytes(list(images) + list(range(d, 256)))


def perm_order(a):
    n = 1
    x = a
    while x != IDENT:
        x = compose(x, a)
        n += 1
    return n


def moved_points(a, degree):
    return [x for x in range(degree) if a[x] != x]


def parse_cycles(text, degree):
    """Parse disjoint-cycle notation with 1-based points, e.g. ``(1,2,3)(4,6,5)``."""
    images = list(range(degree))
    seen = set()
    i = 0
    text = text.strip()
    if text in ("()", ""):
        return from_mapping(images)
    while i < len(text):
        if text[i] != "(":
            raise PgrpError(f"expected '(' at position {i} in cycle string")
        j = text.index(")", i) if ")" in text[i:] else -1
        if j < 0:
            raise PgrpError("unclosed cycle")
        body = text[i + 1 : j].strip()
        if body:
            pts = [int(tok) - 1 for tok in body.replace(" ", "").split(",")]
            for pt in pts:
                if not 0 <= pt < degree:
                    raise PgrpError(f"point {pt + 1} out of range for degree {degree}")
                if pt in seen:
                    raise PgrpError(f"point {pt + 1} repeated")
                seen.add(pt)
            for a, b in zip(pts, pts[1:]):
                images[a] = b
            images[pts[-1]] = pts[0]
        i = j + 1
        while i < len(text) and text[i].isspace():
            i += 1
    return from_mapping(images)


def format_cycles(perm, degree):
    seen = set()
    parts = []
    for start in range(degree):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        parts.append("(" + ",".join(str(pt + 1) for pt in cyc) + ")")
    return "".join(parts) if parts else "()"


class StabChain:
    """Base and strong generating set with fundamental orbits and transversals."""

    def __init__(self, degree, gens=()):
        self.degree = degree
        self.base = []
        self._stored = []  # _stored[i]: strong generators first dropped at level i
        self.orbits = []  # orbits[i]: {point: transversal taking base[i] to point}
        for g in gens:
            self.extend(g)

    def level_gens(self, i):
        out = []
        for j in range(i, len(self._stored)):
            out.extend(self._stored[j])
        return out

    def strong_gens(self):
        return self.level_gens(0)

    def order(self):
        n = 1
        for orb in self.orbits:
            n *= len(orb)
        return n

    def sift(self, g, start=0):
        h = g
        for i in range(start, len(self.base)):
            pt = h[self.base[i]]
            t = self.orbits[i].get(pt)
            if t is None:
                return h, i
            h = compose(h, inverse(t))
        return h, len(self.base)

    def contains(self, g):
        res, _ = self.sift(g)
        return res == IDENT

    def extend(self, g):
        """Add a generator and restore the strong-generation invariant."""
        res, lvl = self.sift(g)
        if res == IDENT:
            return False
        self._store(res, lvl)
        self._establish(0)
        return True

    def _store(self, res, lvl):
        if lvl == len(self.base):
            b = min(moved_points(res, self.degree))
            self.base.append(b)
            self._stored.append([])
            self.orbits.append({b: IDENT})
        self._stored[lvl].append(res)

    def _rebuild_orbit(self, i):
        b = self.base[i]
        gens = self.level_gens(i)
        orb = {b: IDENT}
        frontier = [b]
        while frontier:
            nxt = []
            for pt in frontier:
                t = orb[pt]
                for s in gens:
                    img = s[pt]
                    if img not in orb:
                        orb[img] = compose(t, s)
                        nxt.append(img)
            frontier = nxt
        self.orbits[i] = orb

    def _establish(self, i):
        """Make the Schreier condition hold at every level >= i."""
        if i >= len(self.base):
            return
        while True:
            self._rebuild_orbit(i)
            gens = self.level_gens(i)
            changed = False
            for pt in sorted(self.orbits[i]):
                t = self.orbits[i][pt]
                for s in gens:
                    t2 = self.orbits[i].get(s[pt])
                    if t2 is None:
                        changed = True  # orbit grew mid-scan
                        break
                    sch = compose(compose(t, s), inverse(t2))
                    if sch == IDENT:
                        continue
                    res, lvl = self.sift(sch, i + 1)
                    if res != IDENT:
                        self._store(res, lvl)
                        self._establish(lvl)
                        changed = True
                        break
                if changed:
                    break
            if not changed:
                return


def _as_perm(g, degree):
    if isinstance(g, bytes):
        if len(g) == 256:
            return g
        return from_mapping(list(g))
    return from_mapping(list(g)[:degree] if len(g) > degree else list(g))


class PermGroup:
    """A p-group given by permutation generators and a stabilizer chain."""

    engine = "perm"

    def __init__(self, p, degree, gens, name=None):
        if degree > MAX_DEGREE:
            raise CapacityError(f"degree {degree} exceeds the permutation engine limit")
        self.p = p
        self.degree = degree
        self.gens = [_as_perm(g, degree) for g in gens]
        self.chain = StabChain(degree, self.gens)
        self.name = name
        order = self.chain.order()
        e = 0
        n = order
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise PgrpError(f"group order {order} is not a power of {p}")
        self.order = order
        self.n_exp = e
        self._cache = {}

    def contains(self, g):
        return self.chain.contains(g)

    def full_subgroup(self):
        return PermSubgroup(self, self.gens, chain=self.chain)

    def trivial_subgroup(self):
        return PermSubgroup(self, [])

    def subgroup(self, gens):
        return PermSubgroup(self, [_as_perm(g, self.degree) for g in gens])

    def __repr__(self):
        return f"PermGroup(p={self.p}, degree={self.degree}, order={self.p}^{self.n_exp})"


class PermSubgroup:
    """Subgroup handle: generator list with its own stabilizer chain."""

    engine = "perm"

    def __init__(self, parent, gens, chain=None):
        self.parent = parent
        self.gens = list(gens)
        self.chain = chain if chain is not None else StabChain(parent.degree, self.gens)

    @property
    def order(self):
        return self.chain.order()

    def order_exp(self):
        n = self.order
        e = 0
        while n > 1:
            n //= self.parent.p
            e += 1
        return e

    def contains(self, g):
        return self.chain.contains(g)

    def is_trivial(self):
        return self.order == 1

    def same_as(self, other):
        if self.order != other.order:
            return False
        return all(other.contains(g) for g in self.gens)

    def __repr__(self):
        return f"PermSubgroup(order={self.order})"


def normal_closure_perm(group, sub_gens):
    """Smallest subgroup containing ``sub_gens`` closed under conjugation."""
    gens = [g for g in sub_gens if g != IDENT]
    chain = StabChain(group.degree, gens)
    inv_g = [(g, inverse(g)) for g in group.gens]
    work = list(gens)
    kept = list(gens)
    while work:
        x = work.pop()
        for g, gi in inv_g:
            c = compose(compose(gi, x), g)
            if not chain.contains(c):
                chain.extend(c)
                kept.append(c)
                work.append(c)
    return PermSubgroup(group, kept, chain=chain)


def commutator_gens(agens, bgens):
    out = []
    for a in agens:
        ai = inverse(a)
        for b in bgens:
            c = compose(compose(compose(ai, inverse(b)), a), b)
            if c != IDENT:
                out.append(c)
    return out


def commutator_subgroup_perm(group, a, b):
    """[A, B] as the normal closure of generator commutators inside <A, B>."""
    gens = commutator_gens(a.gens, b.gens)
    ambient = PermGroup(group.p, group.degree, a.gens + b.gens) if a.gens or b.gens else group
    closed = normal_closure_perm(ambient, gens)
    return PermSubgroup(group, closed.gens, chain=closed.chain)


def lower_central_series_perm(group):
    """Terms G = K_1 >= K_2 >= ... >= 1 with K_{r+1} = [K_r, G]."""
    terms = [group.full_subgroup()]
    while terms[-1].order > 1:
        prev = terms[-1]
        gens = commutator_gens(prev.gens, group.gens)
        nxt = normal_closure_perm(group, gens)
        if nxt.order == prev.order:
            raise IntegrityError("lower central series did not reach 1")
        terms.append(nxt)
    return terms


def derived_series_perm(group):
    terms = [group.full_subgroup()]
    while terms[-1].order > 1:
        prev = terms[-1]
        gens = commutator_gens(prev.gens, prev.gens)
        ambient = PermGroup(group.p, group.degree, prev.gens)
        nxt = normal_closure_perm(ambient, gens)
        nxt = PermSubgroup(group, nxt.gens, chain=nxt.chain)
        if nxt.order == prev.order:
            raise IntegrityError("derived series did not reach 1")
        terms.append(nxt)
    return terms


def nilpotency_class_perm(group):
    return len(lower_central_series_perm(group)) - 1


def subgroup_nilpotency_class_perm(sub):
    """Class of a subgroup viewed as a group in its own right."""
    inner = PermGroup(sub.parent.p, sub.parent.degree, sub.gens)
    return nilpotency_class_perm(inner)


def wreath_top_cycle(inner_degree, p):
    d = inner_degree
    images = list(range(d * p))
    for b in range(p):
        for i in range(d):
            images[b * d + i] = ((b + 1) % p) * d + i
    return from_mapping(images)


def wreath_perm(inner, p):
    """Wreath product: p shifted copies of ``inner`` permuted cyclically."""
    d = inner.degree
    degree = d * p
    if degree > MAX_DEGREE:
        raise CapacityError(f"wreath degree {degree} exceeds the permutation engine limit")
    gens = []
    for g in inner.gens:
        images = list(range(degree))
        for i in range(d):
            images[i] = g[i]
        gens.append(from_mapping(images))
    gens.append(wreath_top_cycle(d, p))
    name = f"({inner.name}) wr C{p}" if inner.name else None
    return PermGroup(inner.p, degree, gens, name=name)


def verify_rank_witness(group, candidate_gens):
    """Check commuting order-p generators that are independent inside ``group``.

    Returns the witness subgroup, or None if any requirement fails.
    """
    p = group.p
    perms = [_as_perm(g, group.degree) for g in candidate_gens]
    for g in perms:
        if not group.contains(g):
            return None
        if perm_order(g) != p:
            return None
    for i, a in enumerate(perms):
        for b in perms[i + 1 :]:
            if compose(a, b) != compose(b, a):
                return None
    sub = PermSubgroup(group, perms)
    if sub.order != p ** len(perms):
        return None
    return sub
