"""Regions cut out of the plane or of D by generalized-circle constraints.

A :class:`Constraint` is a locus plus the set of signs of f it allows:
{-1} is the open inside, {-1, 0} the closed inside, {1} the open outside,
{1, 0} the closed outside and {0} the locus itself. A region either lives
inside D = [-1/2, 1/2)^2 (``in_domain``; D's edges are implicit) or is a free
intersection in the plane, as produced by inversion, translation and the
cylinder maps.

Regions inside D are simplified to a canonical form that depends only on the
point set: every locus the region's closure touches contributes its tightest
implied sign condition, and redundant conditions are then dropped greedily
in a fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError, GeometryInconsistency
from ..gaussian import GaussianInt, GaussianRational
from .arrangement import BOX_EDGES, Arrangement
from .loci import HALF, GenCircle, Matrix2, square_sign_range

__all__ = [
    "Constraint",
    "Region",
    "PrototypeClass",
    "DOMAIN_EDGES",
    "domain_region",
    "empty_region",
    "simplify",
    "invert_region",
    "translate_region",
    "intersect_domain",
    "pullback_region",
    "prototype_set",
    "prototype_step",
    "prototype_step_uncached",
    "classify",
    "cylinder_region",
    "region_contains",
    "class_template",
    "canonical_text",
]

NEG, ZERO, POS = -1, 0, 1
ALL_SIGNS = frozenset((NEG, ZERO, POS))

_SIDE_NAMES = {
    frozenset((NEG,)): ("inside", "excluded"),
    frozenset((NEG, ZERO)): ("inside", "included"),
    frozenset((POS,)): ("outside", "excluded"),
    frozenset((POS, ZERO)): ("outside", "included"),
    frozenset((ZERO,)): ("on", "included"),
    frozenset((NEG, POS)): ("off", "excluded"),
}


@dataclass(frozen=True, order=True)
class Constraint:
    locus: GenCircle
    allowed: tuple[int, ...]

    @classmethod
    def make(cls, locus: GenCircle, allowed) -> "Constraint":
        allowed = frozenset(allowed)
        if not allowed or not allowed <= ALL_SIGNS:
            raise ValueError(f"bad sign set {allowed}")
        return cls(locus, tuple(sorted(allowed)))

    @classmethod
    def inside(cls, locus: GenCircle, closed: bool = False) -> "Constraint":
        return cls.make(locus, (NEG, ZERO) if closed else (NEG,))

    @classmethod
    def outside(cls, locus: GenCircle, closed: bool = True) -> "Constraint":
        """Outside of the locus; closed=True keeps the boundary (removes an open disk)."""
        return cls.make(locus, (POS, ZERO) if closed else (POS,))

    @classmethod
    def on(cls, locus: GenCircle) -> "Constraint":
        return cls.make(locus, (ZERO,))

    @property
    def signs(self) -> frozenset[int]:
        return frozenset(self.allowed)

    @property
    def side(self) -> str:
        return _SIDE_NAMES.get(self.signs, ("any", "included"))[0]

    @property
    def boundary(self) -> str:
        return _SIDE_NAMES.get(self.signs, ("any", "included"))[1]

    def pullback(self, n: Matrix2) -> "Constraint":
        locus, factor = self.locus.pullback(n)
        allowed = self.signs if factor > 0 else frozenset(-s for s in self.signs)
        return Constraint.make(locus, allowed)

    def satisfied(self, z) -> int:
        """Sign of f at z if allowed, else None-like via exception-free tuple."""
        return self.locus.sign_at(z)

    def to_record(self) -> dict:
        rec = self.locus.to_record()
        rec["side"] = self.side
        rec["boundary"] = self.boundary
        return rec

    def text(self) -> str:
        return _constraint_text(self)


# D = [-1/2, 1/2)^2: left/bottom closed, right/top open
DOMAIN_EDGES = (
    Constraint.make(BOX_EDGES[0], (POS, ZERO)),  # 2x + 1 >= 0
    Constraint.make(BOX_EDGES[1], (NEG,)),  # 2x - 1 < 0
    Constraint.make(BOX_EDGES[2], (POS, ZERO)),  # 2y + 1 >= 0
    Constraint.make(BOX_EDGES[3], (NEG,)),  # 2y - 1 < 0
)
_DOMAIN_DEFAULT = {c.locus: c.signs for c in DOMAIN_EDGES}

# loci appearing in prototype sets: the square's edges and the unit circles
# centred at the eight nearest nonzero Gaussian integers
UNIVERSE = tuple(BOX_EDGES) + tuple(
    GenCircle.circle(GaussianInt(a, b), 1) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)
)


@dataclass(frozen=True)
class Region:
    constraints: tuple[Constraint, ...] = ()
    in_domain: bool = True
    punctures: frozenset = frozenset()
    empty: bool = False
    bbox: tuple | None = field(default=None, compare=False)

    @property
    def key(self):
        if self.empty:
            return ("EMPTY", self.in_domain)
        return (self.in_domain, self.constraints, tuple(sorted(self.punctures, key=_pt_key)))

    @property
    def degenerate(self) -> bool:
        """True when the region has empty interior (includes the empty set)."""
        if self.empty:
            return True
        if not self.in_domain:
            return self._free_degenerate()
        info = _mask_info(self)
        return info[1] == 0

    def _free_degenerate(self) -> bool:
        return any(c.signs == frozenset((ZERO,)) for c in self.constraints)

    def to_record(self) -> dict:
        return {
            "domain": "D" if self.in_domain else "plane",
            "empty": self.empty,
            "degenerate": self.degenerate,
            "constraints": [c.to_record() for c in self.constraints],
            "text": canonical_text(self),
        }

    def __str__(self):
        return canonical_text(self)


def _pt_key(z):
    re, im = GaussianRational.coerce(z).parts()
    return (re, im)


def domain_region() -> Region:
    return Region((), True)


def empty_region(in_domain: bool = True) -> Region:
    return Region((), in_domain, frozenset(), True)


# arrangement bookkeeping


@lru_cache(maxsize=64)
def _arrangement(loci: frozenset) -> Arrangement:
    return Arrangement(loci)


def arrangement_for(extra=()) -> Arrangement:
    return _arrangement(frozenset(UNIVERSE) | frozenset(extra))


def _domain_mask(arr: Arrangement) -> int:
    m = arr.all_mask
    for c in DOMAIN_EDGES:
        m &= arr.mask(c.locus, c.signs)
    return m


def _constraint_mask(arr: Arrangement, constraints) -> int:
    m = _domain_mask(arr)
    for c in constraints:
        m &= arr.mask(c.locus, c.signs)
    return m


def _mask_info(region: Region) -> tuple[int, int, Arrangement]:
    """(mask, face mask, arrangement) of a region inside D."""
    arr = arrangement_for(c.locus for c in region.constraints)
    if region.empty:
        return 0, 0, arr
    m = _constraint_mask(arr, region.constraints)
    return m, m & arr.face_mask, arr


def simplify(region: Region) -> Region:
    """Canonical form of a region inside D."""
    if not region.in_domain:
        raise DomainError("simplify applies to regions inside D; intersect with D first")
    if region.empty:
        return empty_region()
    kept = []
    for c in region.constraints:
        if c.locus.meets_closed_square():
            kept.append(c)
            continue
        # constant sign over the closed square
        lo, hi = square_sign_range(c.locus)
        sign = 1 if lo > 0 else -1
        if sign not in c.signs:
            return empty_region()
    arr = arrangement_for(c.locus for c in kept)
    mask = _constraint_mask(arr, kept)
    if mask == 0:
        return empty_region()
    candidates = []
    for locus in arr.loci:
        implied = arr.attained_signs(locus, mask)
        if locus in _DOMAIN_DEFAULT:
            implied = implied & _DOMAIN_DEFAULT[locus]
            if implied == _DOMAIN_DEFAULT[locus]:
                continue
        elif implied == ALL_SIGNS:
            continue
        candidates.append(Constraint.make(locus, implied))
    # drop redundant conditions: domain-edge tightenings first, then the rest
    candidates.sort(key=lambda c: (c.locus not in _DOMAIN_DEFAULT, c.signs == frozenset((ZERO,)), c))
    remaining = list(candidates)
    for c in candidates:
        trial = [d for d in remaining if d != c]
        if _constraint_mask(arr, trial) == mask:
            remaining = trial
    punctures = frozenset(p for p in region.punctures if _in_mask_point(arr, remaining, p))
    return Region(tuple(sorted(remaining)), True, punctures)


def _in_mask_point(arr, constraints, z) -> bool:
    return region_contains(Region(tuple(constraints), True), z) == "included"


def region_mask(region: Region) -> tuple[int, Arrangement]:
    m, _, arr = _mask_info(region)
    return m, arr


def same_point_set(r1: Region, r2: Region) -> bool:
    """Exact equality of two regions inside D."""
    loci = [c.locus for c in r1.constraints + r2.constraints]
    arr = arrangement_for(loci)
    m1 = 0 if r1.empty else _constraint_mask(arr, r1.constraints)
    m2 = 0 if r2.empty else _constraint_mask(arr, r2.constraints)
    return m1 == m2 and r1.punctures == r2.punctures


# transformations


def _free_constraints(region: Region) -> tuple[Constraint, ...]:
    if region.in_domain:
        return DOMAIN_EDGES + region.constraints
    return region.constraints


def _mobius_point(n: Matrix2, w):
    """N applied to w (None for infinity)."""
    (a, b), (c, d) = n
    if w is None:
        return None if c == 0 else GaussianRational(a, c)
    w = GaussianRational.coerce(w)
    den = w * c + d
    if not den:
        return None
    return (w * a + b) / den


def _inverse_matrix(n: Matrix2) -> Matrix2:
    (a, b), (c, d) = n
    return ((d, -b), (-c, a))


def pullback_region(region: Region, n: Matrix2, bounded: bool | None = None) -> Region:
    """Image of a region under the Moebius map w = N^{-1} z, i.e. {w : N w in region}.

    Punctures move along; when the source is bounded the image of infinity,
    N^{-1}(infinity), is added as a puncture so it is never reported as a member.
    """
    if region.empty:
        return empty_region(False)
    cons = tuple(sorted({c.pullback(n) for c in _free_constraints(region)}))
    inv = _inverse_matrix(n)
    punct = set()
    for p in region.punctures:
        image = _mobius_point(inv, p)
        if image is not None:
            punct.add(image)
    if bounded is None:
        bounded = region.in_domain or any(
            not c.locus.is_line and c.signs <= frozenset((NEG, ZERO)) for c in region.constraints
        )
    if bounded:
        pole = _mobius_point(inv, None)
        if pole is not None:
            punct.add(pole)
    return Region(cons, False, frozenset(punct))


_ONE, _ZERO_G = GaussianInt(1), GaussianInt(0)


def invert_region(region: Region) -> Region:
    """Image under z -> 1/z."""
    return pullback_region(region, ((_ZERO_G, _ONE), (_ONE, _ZERO_G)))


def translate_region(region: Region, g) -> Region:
    """Image under z -> z + g (g a Gaussian integer or rational)."""
    g = GaussianRational.coerce(g)
    if not g:
        return region
    # z = w - g, scaled by the denominator of g
    return pullback_region(region, ((g.den, -g.num), (_ZERO_G, g.den)))


def intersect_domain(region: Region) -> Region:
    """region ∩ D, simplified."""
    if region.in_domain:
        return simplify(region)
    if region.empty:
        return empty_region()
    return simplify(Region(region.constraints, True, region.punctures))


def rotate_region(region: Region, j: int) -> Region:
    """Image under z -> i^j z (free region)."""
    unit = GaussianInt(0, 1) ** (j % 4)
    return pullback_region(region, ((unit.conjugate(), _ZERO_G), (_ZERO_G, _ONE)))


# prototype sets

_STEP_CACHE: dict = {}


def prototype_step(region: Region, b) -> Region:
    """D_{u b} = (D_u^{-1} - b) ∩ D, memoized on the canonical region."""
    b = GaussianInt.coerce(b)
    key = (region.key, b)
    hit = _STEP_CACHE.get(key)
    if hit is not None:
        return hit
    result = prototype_step_uncached(region, b)
    _STEP_CACHE[key] = result
    return result


def prototype_step_uncached(region: Region, b) -> Region:
    b = GaussianInt.coerce(b)
    if region.empty:
        return empty_region()
    # w = 1/z - b  <=>  z = 1/(w + b)
    image = pullback_region(region, ((_ZERO_G, _ONE), (_ONE, b)))
    return intersect_domain(image)


def prototype_set(seq) -> Region:
    from ..hcf import PartialQuotientSeq

    word = PartialQuotientSeq.parse(seq) if isinstance(seq, str) else PartialQuotientSeq(seq)
    region = domain_region()
    for b in word:
        region = prototype_step(region, b)
    return region


# classification


@dataclass(frozen=True)
class PrototypeClass:
    tag: str  # full | regular | irregular
    j: int | None = None
    k: int | None = None
    empty: bool = False

    @property
    def label(self) -> str:
        if self.tag == "full":
            return "full"
        if self.tag == "irregular":
            return "irregular (empty)" if self.empty else "irregular"
        if self.k == 0:
            return "regular D°"
        return f"regular i^{self.j}G{self.k}"

    def to_record(self) -> dict:
        return {"tag": self.tag, "j": self.j, "k": self.k, "label": self.label}


def class_template(j: int, k: int) -> Region:
    """The region i^j G_k (with closed disks removed from D; only interiors matter)."""
    centers = {1: [GaussianInt(1), GaussianInt(0, 1)], 2: [GaussianInt(1)], 3: [GaussianInt(1, 1)]}[k]
    unit = GaussianInt(0, 1) ** j
    cons = tuple(Constraint.outside(GenCircle.circle(unit * c, 1), closed=True) for c in centers)
    return Region(tuple(sorted(cons)), True)


_CLASS_CACHE: dict = {}


def classify(region: Region) -> PrototypeClass:
    if not region.in_domain:
        raise DomainError("classify expects a prototype set (region inside D)")
    if region.empty:
        return PrototypeClass("irregular", empty=True)
    hit = _CLASS_CACHE.get(region.key)
    if hit is not None:
        return hit
    mask, face, arr = _mask_info(region)
    if mask == 0:
        result = PrototypeClass("irregular", empty=True)
    elif mask == _domain_mask(arr) and not region.punctures:
        result = PrototypeClass("full")
    elif face == 0:
        result = PrototypeClass("irregular")
    else:
        result = None
        if face == _domain_mask(arr) & arr.face_mask:
            result = PrototypeClass("regular", 0, 0)
        else:
            for k in (1, 2, 3):
                for j in range(4):
                    t = class_template(j, k)
                    if _constraint_mask(arr, t.constraints) & arr.face_mask == face:
                        result = PrototypeClass("regular", j, k)
                        break
                if result:
                    break
        if result is None:
            raise GeometryInconsistency(f"regular region matches none of the 13 interiors: {canonical_text(region)}")
    _CLASS_CACHE[region.key] = result
    return result


# cylinders


def cylinder_region(seq) -> Region:
    """C(u) = T_u(D_u) as a free region, with a bounding box from interval arithmetic."""
    from ..enclosures import ComplexBox
    from ..hcf import PartialQuotientSeq, mobius_apply, qpair

    word = PartialQuotientSeq.parse(seq) if isinstance(seq, str) else PartialQuotientSeq(seq)
    if not word:
        raise DomainError("cylinder_region needs a nonempty word")
    proto = prototype_set(word)
    if proto.empty:
        return empty_region(False)
    pair = qpair(word)
    # z = T_u^{-1}(w) = (q w - p)/(-q- w + p-)
    n = ((pair.q, -pair.p), (-pair.q_minus, pair.p_minus))
    image = pullback_region(proto, n, bounded=True)
    box = mobius_apply(word, ComplexBox.from_bounds(-HALF, HALF, -HALF, HALF))
    bbox = (box.re.lo, box.re.hi, box.im.lo, box.im.hi)
    return Region(image.constraints, False, image.punctures, False, bbox)


def region_contains(region: Region, z) -> str:
    """'included', 'excluded' or 'boundary_on_excluded_edge' for an exact point z.

    Inside D, a point outside D (including D's open right and top edges) is
    'excluded'; the boundary answer is reserved for the region's own
    constraints.
    """
    if region.empty:
        return "excluded"
    zr = GaussianRational.coerce(z)
    x, y = zr.parts()
    if region.in_domain and not (-HALF <= x < HALF and -HALF <= y < HALF):
        return "excluded"
    if zr in region.punctures:
        return "excluded"
    boundary = False
    for c in region.constraints:
        s = c.locus.sign_at((x, y))
        if s in c.signs:
            continue
        if s == 0:
            boundary = True
        else:
            return "excluded"
    return "boundary_on_excluded_edge" if boundary else "included"


# text


def _constraint_text(c: Constraint) -> str:
    locus = c.locus
    s = c.signs
    if locus.is_line:
        a, b, rhs = locus.line_form()
        if b == 0:
            var, val = "Re z", rhs / a
        elif a == 0:
            var, val = "Im z", rhs / b
        else:
            var, val = f"{_frac(a)}x + {_frac(b)}y", rhs
        # f = a x + b y - rhs with positive leading coefficient
        ops = {
            frozenset((POS,)): ">",
            frozenset((POS, ZERO)): ">=",
            frozenset((NEG,)): "<",
            frozenset((NEG, ZERO)): "<=",
            frozenset((ZERO,)): "=",
            frozenset((NEG, POS)): "!=",
        }
        return f"& {{{var} {ops[s]} {_frac(val)}}}"
    name = locus.disk_name()
    if s == frozenset((POS, ZERO)):
        return f"\\ {name}"
    if s == frozenset((POS,)):
        return f"\\ closed{name}"
    if s == frozenset((NEG,)):
        return f"& {name}"
    if s == frozenset((NEG, ZERO)):
        return f"& closed{name}"
    if s == frozenset((ZERO,)):
        return f"& {{{locus.describe()}}}"
    return f"\\ {{{locus.describe()}}}"


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def canonical_text(region: Region) -> str:
    base = "D" if region.in_domain else "C"
    if region.empty:
        return "empty"
    parts = [base] + [_constraint_text(c) for c in _display_order(region.constraints)]
    text = " ".join(parts)
    if region.punctures and region.in_domain:
        text += " minus {" + ", ".join(str(p) for p in sorted(region.punctures, key=_pt_key)) + "}"
    return text


def _display_order(constraints):
    # intersections before removals, lines before circles
    return sorted(constraints, key=lambda c: (not c.locus.is_line, c.side == "outside", c))
