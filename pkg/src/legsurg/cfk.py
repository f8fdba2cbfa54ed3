"""Bifiltered knot complexes over GF(2) and their surgery-level invariants.

A complex is a finite set of generators with (maslov, alexander)
bigradings and arrows labelled by nonnegative filtration drops
``(i_drop, j_drop)``.  An arrow ``x -> y`` with drops ``(a, b)`` encodes
a differential component that, over the one-variable polynomial action
(degree -2, dropping both filtrations by one), satisfies

    alexander(y) = alexander(x) + a - b
    maslov(y)    = maslov(x) - 1 + 2a

so the differential always drops the homological grading by one.

From this data the module computes the large-surgery homologies at each
parameter ``s`` together with their vertical/horizontal comparison maps
to the rank-one homology of the three-sphere, the concordance-type
numbers tau, nu, nu+ and the non-increasing sequences V_s, H_s, graded
Euler characteristics, and mirrors.  All homology is Gaussian
elimination over GF(2) with pivot order fixed by sorted generator
names, so bases are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, StabilizationError
from .gf2 import SpanBasis

_DATA_DIR = Path(__file__).parent / "data" / "complexes"

CATALOG_NAMES = ("unknot", "rh_trefoil", "lh_trefoil", "figure8", "k9_46", "k10_140")

# Maximal Thurston-Bennequin representatives used alongside the catalog
# complexes (classical values from the standard Legendrian knot tables).
CATALOG_CLASSICAL: Dict[str, Tuple[int, int]] = {
    "unknot": (-1, 0),
    "rh_trefoil": (1, 0),
    "lh_trefoil": (-6, 1),
    "figure8": (-3, 0),
    "k9_46": (-1, 0),
    "k10_140": (-1, 0),
}


@dataclass(frozen=True)
class Generator:
    name: str
    maslov: int
    alexander: int


@dataclass(frozen=True)
class Arrow:
    src: str
    dst: str
    i_drop: int
    j_drop: int


@dataclass(frozen=True)
class BifilteredComplex:
    generators: Tuple[Generator, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InputError("duplicate generator names")
        if not names:
            raise InputError("complex has no generators")
        by_name = {g.name: g for g in self.generators}
        for ar in self.arrows:
            if ar.src not in by_name or ar.dst not in by_name:
                raise InputError(f"arrow references unknown generator: {ar}")
            if ar.i_drop < 0 or ar.j_drop < 0:
                raise InputError(f"negative filtration drop: {ar}")
            src, dst = by_name[ar.src], by_name[ar.dst]
            if dst.alexander != src.alexander + ar.i_drop - ar.j_drop:
                raise InputError(f"alexander grading mismatch on {ar}")
            if dst.maslov != src.maslov - 1 + 2 * ar.i_drop:
                raise InputError(f"maslov grading mismatch on {ar}")
        self._check_d_squared()

    def _check_d_squared(self):
        outgoing: Dict[str, List[Arrow]] = {g.name: [] for g in self.generators}
        for ar in self.arrows:
            outgoing[ar.src].append(ar)
        for g in self.generators:
            paths: Dict[Tuple[str, int, int], int] = {}
            for a1 in outgoing[g.name]:
                for a2 in outgoing[a1.dst]:
                    key = (a2.dst, a1.i_drop + a2.i_drop, a1.j_drop + a2.j_drop)
                    paths[key] = paths.get(key, 0) ^ 1
            if any(paths.values()):
                raise InputError(f"differential does not square to zero at {g.name}")

    # -- basic accessors -------------------------------------------------

    def gen_order(self) -> List[Generator]:
        """Generators in the canonical (sorted-name) order."""
        return sorted(self.generators, key=lambda g: g.name)

    def genus_bound(self) -> int:
        return max(abs(g.alexander) for g in self.generators)


# -- constructors --------------------------------------------------------


def unknot() -> BifilteredComplex:
    return BifilteredComplex((Generator("u0", 0, 0),), ())


def box(center: int = 0, maslov: int = 0, prefix: str = "x") -> BifilteredComplex:
    """Minimal acyclic square; optionally repositioned in the plane."""
    gens = (
        Generator(f"{prefix}0", maslov, center),
        Generator(f"{prefix}1", maslov + 1, center + 1),
        Generator(f"{prefix}2", maslov - 1, center - 1),
        Generator(f"{prefix}3", maslov, center),
    )
    arrows = (
        Arrow(f"{prefix}0", f"{prefix}1", 1, 0),
        Arrow(f"{prefix}0", f"{prefix}2", 0, 1),
        Arrow(f"{prefix}1", f"{prefix}3", 0, 1),
        Arrow(f"{prefix}2", f"{prefix}3", 1, 0),
    )
    return BifilteredComplex(gens, arrows)


def staircase(steps: Sequence[int]) -> BifilteredComplex:
    """Zigzag complex with alternating horizontal/vertical step lengths.

    ``steps`` must be a nonempty even-length list of positive integers
    with even total (so the top generator sits at an integer Alexander
    grading).  Odd-indexed generators carry the two differential arrows;
    maslov gradings are normalized so the vertical homology is in
    grading zero.
    """
    if not steps:
        raise InputError("staircase requires a nonempty step list")
    if len(steps) % 2 != 0 or any(s <= 0 for s in steps):
        raise InputError("staircase steps must be positive and even in number")
    total = sum(steps)
    if total % 2 != 0:
        raise InputError("staircase steps must have even total")
    top = total // 2
    alex = [top]
    for s in steps:
        alex.append(alex[-1] - s)
    maslov = [0] * len(alex)
    for k in range(1, len(alex)):
        if k % 2 == 1:
            # arrow p_k -> p_{k-1} is horizontal with i_drop = steps[k-1]
            maslov[k] = maslov[k - 1] + 1 - 2 * steps[k - 1]
        else:
            # arrow p_{k-1} -> p_k is vertical
            maslov[k] = maslov[k - 1] - 1
    gens = tuple(Generator(f"a{k}", maslov[k], alex[k]) for k in range(len(alex)))
    arrows = []
    for k in range(1, len(alex), 2):
        arrows.append(Arrow(f"a{k}", f"a{k - 1}", steps[k - 1], 0))
        arrows.append(Arrow(f"a{k}", f"a{k + 1}", 0, steps[k]))
    return BifilteredComplex(gens, tuple(arrows))


def direct_sum(a: BifilteredComplex, b: BifilteredComplex) -> BifilteredComplex:
    names_a = {g.name for g in a.generators}
    clash = names_a & {g.name for g in b.generators}

    def rename(g: str) -> str:
        return f"q.{g}" if g in clash else g

    gens = a.generators + tuple(
        Generator(rename(g.name), g.maslov, g.alexander) for g in b.generators
    )
    arrows = a.arrows + tuple(
        Arrow(rename(ar.src), rename(ar.dst), ar.i_drop, ar.j_drop) for ar in b.arrows
    )
    return BifilteredComplex(gens, arrows)


def mirror(c: BifilteredComplex) -> BifilteredComplex:
    """Dual complex: arrows reversed with the same drops, gradings negated."""
    gens = tuple(Generator(g.name, -g.maslov, -g.alexander) for g in c.generators)
    arrows = tuple(Arrow(ar.dst, ar.src, ar.i_drop, ar.j_drop) for ar in c.arrows)
    return BifilteredComplex(gens, arrows)


def flip(c: BifilteredComplex) -> BifilteredComplex:
    """Exchange the two filtration directions of the same complex."""
    gens = tuple(
        Generator(g.name, g.maslov - 2 * g.alexander, -g.alexander)
        for g in c.generators
    )
    arrows = tuple(Arrow(ar.src, ar.dst, ar.j_drop, ar.i_drop) for ar in c.arrows)
    return BifilteredComplex(gens, arrows)


# -- homology machinery ---------------------------------------------------


class _Homology:
    """Homology of a finite GF(2) complex given by differential columns.

    Vectors are bitmasks over a fixed element order.  Exposes cycle
    representatives for a homology basis and coordinates of arbitrary
    cycles in that basis.
    """

    def __init__(self, n: int, dcols: Sequence[int]):
        self.n = n
        boundaries = SpanBasis()
        for col in dcols:
            if col:
                boundaries.insert(col)
        kernel: List[int] = []
        tracker = SpanBasis()
        for j, col in enumerate(dcols):
            dep = tracker.insert(col)
            if dep is not None:
                kernel.append(dep | (1 << j))
        selector = SpanBasis()
        bnd_vectors = boundaries.vectors()
        for vec in bnd_vectors:
            selector.insert(vec)
        self.reps: List[int] = []
        for z in kernel:
            if selector.insert(z) is None:
                self.reps.append(z)
        self.dim = len(self.reps)
        # rebuild so combination indices align with [boundaries..., reps...]
        self._mixed = SpanBasis()
        self._n_boundary = len(bnd_vectors)
        for vec in bnd_vectors:
            self._mixed.insert(vec)
        for z in self.reps:
            self._mixed.insert(z)

    def coords(self, vec: int) -> int:
        """Coordinates of a cycle's class in the rep basis (bitmask)."""
        residual, combo = self._mixed.reduce(vec)
        if residual != 0:
            raise InputError("vector is not a cycle")
        return combo >> self._n_boundary


def _diff_columns(
    order: List[Generator],
    arrows: Iterable[Arrow],
    keep: Callable[[Arrow], bool],
) -> List[int]:
    idx = {g.name: i for i, g in enumerate(order)}
    cols = [0] * len(order)
    for ar in arrows:
        if keep(ar):
            cols[idx[ar.src]] ^= 1 << idx[ar.dst]
    return cols


@dataclass(frozen=True)
class AHatData:
    """Homology of the hat-flavor large-surgery complex at parameter s.

    ``reps`` are cycle representatives (bitmasks over ``gen_names``);
    ``v_row`` / ``h_row`` are 1 x dim GF(2) matrices (bitmask over the
    basis) of the induced maps to the rank-one vertical / horizontal
    homologies.
    """

    s: int
    gen_names: Tuple[str, ...]
    reps: Tuple[int, ...]
    v_row: int
    h_row: int

    @property
    def dim(self) -> int:
        return len(self.reps)

    def v_iso(self) -> bool:
        return self.dim == 1 and self.v_row != 0

    def h_iso(self) -> bool:
        return self.dim == 1 and self.h_row != 0


def a_hat(c: BifilteredComplex, s: int) -> AHatData:
    """Large-surgery homology at level ``s`` with its two edge maps.

    The complex kept is the subquotient where ``max(i, j - s)`` is zero:
    each generator ``x`` appears once, shifted by ``max(0, A(x) - s)``
    powers of the action, and an arrow survives exactly when its shift
    matches the target's.  The vertical (resp. horizontal) map kills
    generators with ``A(x) > s`` (resp. ``A(x) < s``).
    """
    order = c.gen_order()
    n = len(order)
    shift = {g.name: max(0, g.alexander - s) for g in order}
    cols = _diff_columns(
        order, c.arrows, lambda ar: shift[ar.src] + ar.i_drop == shift[ar.dst]
    )
    hom = _Homology(n, cols)

    vert = _Homology(n, _diff_columns(order, c.arrows, lambda ar: ar.i_drop == 0))
    horz = _Homology(n, _diff_columns(order, c.arrows, lambda ar: ar.j_drop == 0))
    if vert.dim != 1 or horz.dim != 1:
        raise InputError("complex is not knot-like: side homologies not rank one")

    v_mask = 0
    h_mask = 0
    for i, g in enumerate(order):
        if g.alexander <= s:
            v_mask |= 1 << i
        if g.alexander >= s:
            h_mask |= 1 << i
    v_row = 0
    h_row = 0
    for j, rep in enumerate(hom.reps):
        if vert.coords(rep & v_mask):
            v_row |= 1 << j
        if horz.coords(rep & h_mask):
            h_row |= 1 << j
    return AHatData(
        s=s,
        gen_names=tuple(g.name for g in order),
        reps=tuple(hom.reps),
        v_row=v_row,
        h_row=h_row,
    )


# -- concordance invariants ----------------------------------------------


def _tau(c: BifilteredComplex) -> int:
    order = c.gen_order()
    n = len(order)
    vert_cols = _diff_columns(order, c.arrows, lambda ar: ar.i_drop == 0)
    vert = _Homology(n, vert_cols)
    target_rep = vert.reps[0]
    g = c.genus_bound()
    for s in range(-g, g + 1):
        keep_mask = 0
        for i, gen in enumerate(order):
            if gen.alexander <= s:
                keep_mask |= 1 << i
        # cycles of the j <= s subcomplex, then boundaries of the full one
        span = SpanBasis()
        for col in vert_cols:
            if col:
                span.insert(col)
        sub_tracker = SpanBasis()
        kept: List[int] = []
        for j in range(n):
            if not (keep_mask >> j) & 1:
                continue
            dep = sub_tracker.insert(vert_cols[j])
            kept.append(j)
            if dep is not None:
                # dependency bits index the insertion order among kept gens
                cycle = 1 << j
                for bit_pos, j2 in enumerate(kept):
                    if (dep >> bit_pos) & 1:
                        cycle |= 1 << j2
                span.insert(cycle)
        if span.contains(target_rep):
            return s
    raise InputError("tau not found within the genus bound")


def _nu(c: BifilteredComplex) -> int:
    g = c.genus_bound()
    for s in range(-g - 1, g + 2):
        if a_hat(c, s).v_row != 0:
            return s
    raise InputError("nu not found within the genus bound")


class _PlusModel:
    """Truncated plus-flavor model of the large-surgery complex.

    Elements are pairs ``(generator, i)`` with
    ``min(0, s - A(x)) <= i <= depth``; components of the differential
    falling below a generator's floor are quotiented away.
    """

    def __init__(self, c: BifilteredComplex, s: Optional[int], depth: int):
        order = c.gen_order()
        self.elements: List[Tuple[str, int]] = []
        floor: Dict[str, int] = {}
        for g in order:
            floor[g.name] = 0 if s is None else min(0, s - g.alexander)
        for g in order:
            for i in range(floor[g.name], depth + 1):
                self.elements.append((g.name, i))
        self.index = {e: k for k, e in enumerate(self.elements)}
        self.floor = floor
        self.depth = depth
        self.alex = {g.name: g.alexander for g in order}
        by_src: Dict[str, List[Arrow]] = {}
        for ar in c.arrows:
            by_src.setdefault(ar.src, []).append(ar)
        cols = [0] * len(self.elements)
        for k, (name, i) in enumerate(self.elements):
            for ar in by_src.get(name, ()):
                ti = i - ar.i_drop
                if ti >= floor[ar.dst]:
                    cols[k] ^= 1 << self.index[(ar.dst, ti)]
        self.hom = _Homology(len(self.elements), cols)

    def chain_map(self, elt_map: Callable[[str, int], Optional[Tuple[str, int]]],
                  target: "_PlusModel") -> List[int]:
        """Matrix of an induced map on homology, one column per rep."""
        out = []
        for rep in self.hom.reps:
            img = 0
            for k, e in enumerate(self.elements):
                if (rep >> k) & 1:
                    t = elt_map(*e)
                    if t is not None and t in target.index:
                        img ^= 1 << target.index[t]
            out.append(target.hom.coords(img))
        return out

    def u_matrix(self) -> List[int]:
        """Homology matrix of the polynomial action (columns per rep)."""
        def down(name: str, i: int):
            return (name, i - 1) if i - 1 >= self.floor[name] else None

        return self.chain_map(down, self)


def _u_stable_image(model: _PlusModel, power: int) -> List[int]:
    """Basis (in rep coordinates) of the image of U_*^power."""
    dim = model.hom.dim
    mat = model.u_matrix()
    vecs = [1 << j for j in range(dim)]
    for _ in range(power):
        nxt = []
        for v in vecs:
            img = 0
            for j in range(dim):
                if (v >> j) & 1:
                    img ^= mat[j]
            nxt.append(img)
        vecs = nxt
    basis = SpanBasis()
    out = []
    for v in vecs:
        if v and basis.insert(v) is None:
            out.append(v)
    return out


def _v_delay(c: BifilteredComplex, s: int, depth: int) -> int:
    """Tower delay of the projection A+_s -> B+ at the given truncation."""
    a_model = _PlusModel(c, s, depth)
    b_model = _PlusModel(c, None, depth)

    def proj(name: str, i: int):
        return (name, i) if i >= 0 else None

    v_cols = a_model.chain_map(proj, b_model)
    tower = _u_stable_image(a_model, max(1, depth // 2))
    if not tower:
        raise StabilizationError(f"no tower classes at depth {depth} (s={s})")
    img = SpanBasis()
    img_dim = 0
    for t in tower:
        out = 0
        for j in range(a_model.hom.dim):
            if (t >> j) & 1:
                out ^= v_cols[j]
        if out and img.insert(out) is None:
            img_dim += 1
    return len(tower) - img_dim


def _v_map(c: BifilteredComplex, s_range: Iterable[int]) -> Dict[int, int]:
    g = c.genus_bound()
    out = {}
    for s in s_range:
        depth = 2 * g + 2 + 2 * max(0, -s)
        first = _v_delay(c, s, depth)
        second = _v_delay(c, s, depth + 2)
        if first != second:
            raise StabilizationError(
                f"V_{s} unstable: {first} at depth {depth}, {second} at {depth + 2}"
            )
        out[s] = first
    return out


@dataclass(frozen=True)
class KnotInvariants:
    tau: int
    nu: int
    nu_plus: int
    genus_bound: int
    V: Dict[int, int]
    H: Dict[int, int]


def knot_invariants(c: BifilteredComplex, s_extent: Optional[int] = None) -> KnotInvariants:
    """Concordance package: tau, nu, nu+, and the V/H sequences.

    ``s_extent`` controls how far the V/H maps are tabulated (default:
    max(genus bound, 5) + 1).  V is computed from the plus-flavor
    truncation at two depths with a mandatory agreement check; H runs
    the same computation on the filtration-flipped complex.
    """
    g = c.genus_bound()
    extent = s_extent if s_extent is not None else max(g, 5) + 1
    s_range = range(-extent, extent + 1)
    v = _v_map(c, s_range)
    h = {s: val for s, val in _v_map(flip(c), s_range).items()}
    h = {-s: val for s, val in h.items()}
    nu_plus = min(s for s in sorted(v) if v[s] == 0)
    return KnotInvariants(
        tau=_tau(c),
        nu=_nu(c),
        nu_plus=nu_plus,
        genus_bound=g,
        V=dict(sorted(v.items())),
        H=dict(sorted(h.items())),
    )


def is_unknot_like(c: BifilteredComplex) -> bool:
    """Whether the complex splits as unknot plus acyclic (nu+ test)."""
    return _v_delay_zero(c) and _v_delay_zero(mirror(c))


def _v_delay_zero(c: BifilteredComplex) -> bool:
    g = c.genus_bound()
    depth = 2 * g + 2
    first = _v_delay(c, 0, depth)
    second = _v_delay(c, 0, depth + 2)
    if first != second:
        raise StabilizationError("V_0 unstable under depth increase")
    return first == 0


# -- Euler characteristic --------------------------------------------------


def euler_characteristic(c: BifilteredComplex) -> Dict[int, int]:
    """Graded Euler characteristic as {alexander: signed count}."""
    out: Dict[int, int] = {}
    for g in c.generators:
        sign = 1 if g.maslov % 2 == 0 else -1
        out[g.alexander] = out.get(g.alexander, 0) + sign
    return {k: v for k, v in sorted(out.items()) if v != 0}


def format_laurent(poly: Dict[int, int]) -> str:
    if not poly:
        return "0"
    parts = []
    for exp in sorted(poly, reverse=True):
        coeff = poly[exp]
        mag = abs(coeff)
        if exp == 0:
            term = str(mag)
        else:
            t = "t" if exp == 1 else ("t^-1" if exp == -1 else f"t^{exp}")
            term = t if mag == 1 else f"{mag}*{t}"
        if not parts:
            parts.append(term if coeff > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if coeff > 0 else f"- {term}")
    return " ".join(parts)


def normalize_sign(poly: Dict[int, int]) -> Dict[int, int]:
    """Scale by -1 if needed so the top-degree coefficient is positive."""
    if not poly:
        return poly
    top = max(poly)
    return poly if poly[top] > 0 else {k: -v for k, v in poly.items()}


# -- file format and catalog ----------------------------------------------


def parse_complex(text: str) -> BifilteredComplex:
    """Parse the ``gen``/``arr`` line format."""
    gens: List[Generator] = []
    arrows: List[Arrow] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "gen" and len(parts) == 4:
                gens.append(Generator(parts[1], int(parts[2]), int(parts[3])))
            elif parts[0] == "arr" and len(parts) == 5:
                arrows.append(Arrow(parts[1], parts[2], int(parts[3]), int(parts[4])))
            else:
                raise ValueError(line)
        except ValueError:
            raise InputError(f"bad complex line {lineno}: {raw!r}")
    return BifilteredComplex(tuple(gens), tuple(arrows))


def serialize_complex(c: BifilteredComplex) -> str:
    lines = [
        f"gen {g.name} {g.maslov} {g.alexander}"
        for g in sorted(c.generators, key=lambda g: g.name)
    ]
    lines += [
        f"arr {a.src} {a.dst} {a.i_drop} {a.j_drop}"
        for a in sorted(c.arrows, key=lambda a: (a.src, a.dst, a.i_drop, a.j_drop))
    ]
    return "\n".join(lines) + "\n"


def load_complex(ref: str) -> BifilteredComplex:
    """Load a complex by catalog name or file path."""
    if ref in CATALOG_NAMES:
        path = _DATA_DIR / f"{ref}.cfk"
    else:
        path = Path(ref)
        if not path.exists():
            raise InputError(f"unknown complex reference: {ref}")
    return parse_complex(path.read_text())
