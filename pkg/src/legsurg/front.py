"""Legendrian front projections as Morse-event words.

A front is encoded as a left-to-right sequence of events on a stack of
live strands (level 0 at the bottom):

* ``L i``  left cusp: inserts two new strands at levels ``i, i+1``;
* ``R i``  right cusp: closes the adjacent strands at ``i, i+1``;
* ``X i``  crossing of the strands at ``i, i+1``.

Crossings carry no over/under flag: in a front the strand of lesser
slope is in front, so at every crossing the locally descending strand
(the one moving from level ``i+1`` to ``i``) is the over-strand.

Orientations are one token per component.  ``+`` means the component's
seed strand (the lower strand born at its first left cusp) is traversed
rightward; cusps reverse the traversal direction, crossings do not.
With these conventions:

* crossing sign is ``+1`` exactly when over- and under-strand point the
  same way along the x-axis;
* a cusp counts as "down" when the motion through it passes from the
  upper branch to the lower branch, and rot = (down - up) / 2;
* tb = writhe - (cusps / 2), and lk is half the signed count of
  inter-component crossings.

The sign table is pinned by the shipped maximal trefoil front
(writhe +3, tb = 1, rot = 0) and by lk(K, push-off) = tb(K).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    ComponentCountError,
    FrontSyntaxError,
    FrontTopologyError,
    InputError,
)


class FrontEvent(NamedTuple):
    kind: str  # "L", "R" or "X"
    level: int


class EventInfo(NamedTuple):
    """Strands touched by one event: the lower and upper participant."""

    kind: str
    level: int
    s_lo: int
    s_hi: int


class Trace:
    """Strand-level analysis of an event word.

    Assigns strand ids in birth order, records which strands each event
    touches, the live stack before every event, and the partition of
    strands into components.
    """

    def __init__(self, events: Sequence[FrontEvent]):
        live: List[int] = []
        self.states: List[Tuple[int, ...]] = []
        self.info: List[EventInfo] = []
        parent: Dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        next_sid = 0
        self.birth: Dict[int, int] = {}
        for t, ev in enumerate(events):
            self.states.append(tuple(live))
            kind, i = ev.kind, ev.level
            n = len(live)
            if kind == "L":
                if not 0 <= i <= n:
                    raise FrontTopologyError(
                        f"left cusp level {i} out of range at event {t}"
                    )
                lo, hi = next_sid, next_sid + 1
                next_sid += 2
                parent[lo] = lo
                parent[hi] = hi
                union(lo, hi)
                self.birth[lo] = t
                self.birth[hi] = t
                live[i:i] = [lo, hi]
                self.info.append(EventInfo("L", i, lo, hi))
            elif kind == "R":
                if not 0 <= i <= n - 2:
                    raise FrontTopologyError(
                        f"right cusp level {i} out of range at event {t}"
                    )
                lo, hi = live[i], live[i + 1]
                union(lo, hi)
                del live[i : i + 2]
                self.info.append(EventInfo("R", i, lo, hi))
            elif kind == "X":
                if not 0 <= i <= n - 2:
                    raise FrontTopologyError(
                        f"crossing level {i} out of range at event {t}"
                    )
                lo, hi = live[i], live[i + 1]
                live[i], live[i + 1] = hi, lo
                self.info.append(EventInfo("X", i, lo, hi))
            else:
                raise FrontSyntaxError(f"unknown event kind {kind!r}")
        self.states.append(tuple(live))
        if live:
            raise FrontTopologyError(f"{len(live)} strand(s) left open at the end")
        if next_sid == 0:
            raise FrontTopologyError("empty diagram")

        self.n_strands = next_sid
        roots = sorted({find(s) for s in range(next_sid)})
        comp_of_root = {r: c for c, r in enumerate(roots)}
        self.strand_comp = {s: comp_of_root[find(s)] for s in range(next_sid)}
        self.n_components = len(roots)
        # seed strand = lowest id in the component (root, by union rule)
        self.seeds = roots

    def directions(self, orientations: Sequence[int]) -> Dict[int, int]:
        """Per-strand x-direction (+1 rightward) from component tokens."""
        if len(orientations) != self.n_components:
            raise InputError("orientation count does not match components")
        dirs: Dict[int, int] = {}
        for c, seed in enumerate(self.seeds):
            dirs[seed] = orientations[c]
        # cusp pairs force opposite directions
        adj: Dict[int, List[int]] = {}
        for inf in self.info:
            if inf.kind in ("L", "R"):
                adj.setdefault(inf.s_lo, []).append(inf.s_hi)
                adj.setdefault(inf.s_hi, []).append(inf.s_lo)
        stack = list(dirs)
        while stack:
            s = stack.pop()
            for nb in adj.get(s, ()):
                want = -dirs[s]
                if nb in dirs:
                    if dirs[nb] != want:
                        raise FrontTopologyError("inconsistent orientation")
                else:
                    dirs[nb] = want
                    stack.append(nb)
        if len(dirs) != self.n_strands:
            raise FrontTopologyError("orientation did not reach every strand")
        return dirs


@dataclass(frozen=True)
class FrontDiagram:
    """Validated multi-component front with per-component orientations."""

    events: Tuple[FrontEvent, ...]
    orientations: Tuple[int, ...]
    name: str = ""
    _trace: Trace = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        trace = Trace(self.events)
        if len(self.orientations) != trace.n_components:
            raise InputError(
                f"diagram has {trace.n_components} component(s) but "
                f"{len(self.orientations)} orientation token(s)"
            )
        if any(o not in (1, -1) for o in self.orientations):
            raise InputError("orientation tokens must be +1 or -1")
        object.__setattr__(self, "_trace", trace)

    @property
    def trace(self) -> Trace:
        return self._trace

    @property
    def n_components(self) -> int:
        return self._trace.n_components

    def component_of_strand(self, sid: int) -> int:
        return self._trace.strand_comp[sid]

    def word(self) -> Tuple[Tuple[str, int], ...]:
        return tuple((e.kind, e.level) for e in self.events)


@dataclass(frozen=True)
class ClassicalInvariants:
    writhe: int
    cusps: int
    up_cusps: int
    down_cusps: int
    tb: int
    rot: int
    lk: Optional[int] = None


def make_diagram(
    events: Iterable[Tuple[str, int]],
    orientations: Sequence[int] | None = None,
    name: str = "",
) -> FrontDiagram:
    evs = tuple(FrontEvent(k, l) for k, l in events)
    if orientations is None:
        orientations = (1,) * Trace(evs).n_components
    return FrontDiagram(evs, tuple(orientations), name)


# -- crossing and cusp bookkeeping -----------------------------------------


def _crossing_sign(dirs: Dict[int, int], s_lo: int, s_hi: int) -> int:
    # over-strand = locally descending = the one entering at level i+1
    return 1 if dirs[s_hi] == dirs[s_lo] else -1


def _cusp_is_down(kind: str, dirs: Dict[int, int], s_lo: int, s_hi: int) -> bool:
    if kind == "L":
        # outgoing (rightward) branch at the bottom => motion passes downward
        return dirs[s_lo] == 1
    # right cusp: incoming (rightward) branch on top => downward
    return dirs[s_hi] == 1


def invariants(d: FrontDiagram, comp: int) -> ClassicalInvariants:
    """Classical invariants of one component (0-based index)."""
    tr = d.trace
    if not 0 <= comp < tr.n_components:
        raise ComponentCountError(f"no component {comp}")
    dirs = tr.directions(d.orientations)
    writhe = 0
    up = down = 0
    for inf in tr.info:
        c_lo = tr.strand_comp[inf.s_lo]
        c_hi = tr.strand_comp[inf.s_hi]
        if inf.kind == "X":
            if c_lo == comp and c_hi == comp:
                writhe += _crossing_sign(dirs, inf.s_lo, inf.s_hi)
        else:
            if c_lo == comp:
                if _cusp_is_down(inf.kind, dirs, inf.s_lo, inf.s_hi):
                    down += 1
                else:
                    up += 1
    cusps = up + down
    lk = linking_number(d) if tr.n_components == 2 else None
    return ClassicalInvariants(
        writhe=writhe,
        cusps=cusps,
        up_cusps=up,
        down_cusps=down,
        tb=writhe - cusps // 2,
        rot=(down - up) // 2,
        lk=lk,
    )


def linking_number(d: FrontDiagram) -> int:
    """Half the signed count of inter-component crossings."""
    tr = d.trace
    if tr.n_components != 2:
        raise ComponentCountError(
            f"linking number needs 2 components, got {tr.n_components}"
        )
    dirs = tr.directions(d.orientations)
    total = 0
    for inf in tr.info:
        if inf.kind == "X" and tr.strand_comp[inf.s_lo] != tr.strand_comp[inf.s_hi]:
            total += _crossing_sign(dirs, inf.s_lo, inf.s_hi)
    if total % 2 != 0:
        raise FrontTopologyError("odd signed inter-crossing count")
    return total // 2


def pairwise_linking(d: FrontDiagram, comp_a: int, comp_b: int) -> int:
    """Signed half-count of crossings between two named components."""
    tr = d.trace
    dirs = tr.directions(d.orientations)
    total = 0
    for inf in tr.info:
        if inf.kind != "X":
            continue
        cs = {tr.strand_comp[inf.s_lo], tr.strand_comp[inf.s_hi]}
        if cs == {comp_a, comp_b}:
            total += _crossing_sign(dirs, inf.s_lo, inf.s_hi)
    return total // 2


# -- event-walk builder -----------------------------------------------------


class Builder:
    """Accumulates a new event word while simulating strand ids."""

    def __init__(self) -> None:
        self.events: List[FrontEvent] = []
        self.live: List[int] = []
        self.next_sid = 0

    def emit_l(self, pos: int) -> Tuple[int, int]:
        lo, hi = self.next_sid, self.next_sid + 1
        self.next_sid += 2
        self.live[pos:pos] = [lo, hi]
        self.events.append(FrontEvent("L", pos))
        return lo, hi

    def emit_r(self, pos: int) -> Tuple[int, int]:
        lo, hi = self.live[pos], self.live[pos + 1]
        del self.live[pos : pos + 2]
        self.events.append(FrontEvent("R", pos))
        return lo, hi

    def emit_x(self, pos: int) -> Tuple[int, int]:
        lo, hi = self.live[pos], self.live[pos + 1]
        self.live[pos], self.live[pos + 1] = hi, lo
        self.events.append(FrontEvent("X", pos))
        return lo, hi


def tokens_from_constraints(
    events: Sequence[FrontEvent], constraints: Dict[int, int]
) -> Tuple[int, ...]:
    """Orientation tokens realizing the given strand directions."""
    tr = Trace(events)
    adj: Dict[int, List[int]] = {}
    for inf in tr.info:
        if inf.kind in ("L", "R"):
            adj.setdefault(inf.s_lo, []).append(inf.s_hi)
            adj.setdefault(inf.s_hi, []).append(inf.s_lo)
    dirs: Dict[int, int] = dict(constraints)
    stack = list(dirs)
    while stack:
        s = stack.pop()
        for nb in adj.get(s, ()):
            want = -dirs[s]
            if nb in dirs:
                if dirs[nb] != want:
                    raise FrontTopologyError("conflicting orientation constraints")
            else:
                dirs[nb] = want
                stack.append(nb)
    tokens = []
    for seed in tr.seeds:
        if seed not in dirs:
            raise InputError("orientation constraint missing for a component")
        tokens.append(dirs[seed])
    return tuple(tokens)


# -- push-off ---------------------------------------------------------------


def legendrian_push_off(d: FrontDiagram, comp: int, direction: str) -> FrontDiagram:
    """Add a Legendrian parallel copy of one component.

    ``direction`` is ``"down"`` or ``"up"``.  Each cusp of the copied
    component duplicates into a nested cusp pair with one clasp-free
    crossing, each self-crossing into four crossings, and each crossing
    with another component into two.  The copy inherits the original's
    orientation, so lk(original, copy) equals tb(original).
    """
    tr = d.trace
    if not 0 <= comp < tr.n_components:
        raise ComponentCountError(f"no component {comp}")
    if direction not in ("down", "up"):
        raise InputError("direction must be 'down' or 'up'")
    down = direction == "down"
    dirs = tr.directions(d.orientations)

    b = Builder()
    slots: List[Tuple[str, int]] = []  # ("o"|"c", old sid), aligned with b.live
    old_live: List[int] = []

    def flat(i: int) -> int:
        return sum(2 if tr.strand_comp[s] == comp else 1 for s in old_live[:i])

    def width(s: int) -> int:
        return 2 if tr.strand_comp[s] == comp else 1

    for inf in tr.info:
        i = inf.level
        pos = flat(i)
        if inf.kind == "L":
            p, q = inf.s_lo, inf.s_hi
            if tr.strand_comp[p] == comp:
                b.emit_l(pos)
                b.emit_l(pos + 2)
                b.emit_x(pos + 1)
                if down:
                    new = [("c", p), ("o", p), ("c", q), ("o", q)]
                else:
                    new = [("o", p), ("c", p), ("o", q), ("c", q)]
                slots[pos:pos] = new
            else:
                b.emit_l(pos)
                slots[pos:pos] = [("o", p), ("o", q)]
            old_live[i:i] = [p, q]
        elif inf.kind == "R":
            p, q = inf.s_lo, inf.s_hi
            if tr.strand_comp[p] == comp:
                b.emit_x(pos + 1)
                slots[pos + 1], slots[pos + 2] = slots[pos + 2], slots[pos + 1]
                if down:
                    b.emit_r(pos + 2)
                    b.emit_r(pos)
                else:
                    b.emit_r(pos)
                    b.emit_r(pos)
                del slots[pos : pos + 4]
            else:
                b.emit_r(pos)
                del slots[pos : pos + 2]
            del old_live[i : i + 2]
        else:  # X
            s_lo, s_hi = inf.s_lo, inf.s_hi
            a, bb = width(s_lo), width(s_hi)
            # move the upper block below the lower one slot by slot
            for t in range(bb):
                for k in range(pos + a + t - 1, pos + t - 1, -1):
                    b.emit_x(k)
                    slots[k], slots[k + 1] = slots[k + 1], slots[k]
            old_live[i], old_live[i + 1] = s_hi, s_lo
        assert len(slots) == len(b.live)

    # recover orientation constraints from the slot history: replay to
    # collect new-sid -> direction via a second pass
    constraints = _constraints_from_walk(d, b.events, comp, dirs, down)
    return FrontDiagram(
        tuple(b.events),
        tokens_from_constraints(b.events, constraints),
        name=f"{d.name}+pushoff" if d.name else "",
    )


def _constraints_from_walk(
    d: FrontDiagram,
    new_events: Sequence[FrontEvent],
    comp: int,
    dirs: Dict[int, int],
    down: bool,
) -> Dict[int, int]:
    """Map new strand ids to directions by replaying both walks."""
    tr = d.trace
    new_tr = Trace(new_events)
    constraints: Dict[int, int] = {}
    # walk both event lists in lockstep, pairing birth events
    ni = 0
    for inf in tr.info:
        if inf.kind != "L":
            continue
        p, q = inf.s_lo, inf.s_hi
        # find the next L-events in the new word
        births = []
        need = 2 if tr.strand_comp[p] == comp else 1
        while len(births) < need:
            if new_tr.info[ni].kind == "L":
                births.append(new_tr.info[ni])
            ni += 1
        if need == 1:
            constraints[births[0].s_lo] = dirs[p]
            constraints[births[0].s_hi] = dirs[q]
        else:
            # emission order: first L is the copy pair for "down",
            # the original pair for "up"
            first, second = births
            if down:
                copy_pair, orig_pair = first, second
            else:
                orig_pair, copy_pair = first, second
            constraints[orig_pair.s_lo] = dirs[p]
            constraints[orig_pair.s_hi] = dirs[q]
            constraints[copy_pair.s_lo] = dirs[p]
            constraints[copy_pair.s_hi] = dirs[q]
    return constraints


# -- mirror ------------------------------------------------------------------


def mirror_front(d: FrontDiagram) -> FrontDiagram:
    """Front of the mirror link.

    Every crossing is replaced by the switched-crossing gadget (the
    formerly-under strand is rerouted through a cusp pair so that it
    passes over), which negates all crossing signs; lk negates and the
    underlying link type mirrors.  Plane reflections cannot do this:
    they are ambient rotations and preserve the link type.
    """
    tr = d.trace
    dirs = tr.directions(d.orientations)
    b = Builder()
    # new strand carrying each old strand's path
    carrier: Dict[int, int] = {}
    old_live: List[int] = []
    for inf in tr.info:
        i = inf.level
        if inf.kind == "L":
            lo, hi = b.emit_l(i)
            carrier[inf.s_lo] = lo
            carrier[inf.s_hi] = hi
            old_live[i:i] = [inf.s_lo, inf.s_hi]
        elif inf.kind == "R":
            b.emit_r(i)
            del old_live[i : i + 2]
        else:
            # gadget: reroute the over-strand (old upper) below via a
            # cusp pair so the ascending strand ends up on top
            p, _q = b.emit_l(i)
            b.emit_x(i + 1)
            b.emit_r(i + 2)
            carrier[inf.s_hi] = p
            old_live[i], old_live[i + 1] = inf.s_hi, inf.s_lo
    constraints = {carrier[s]: dirs[s] for s in carrier}
    return FrontDiagram(
        tuple(b.events),
        tokens_from_constraints(b.events, constraints),
        name=f"{d.name}~mirror" if d.name else "",
    )


# -- file format --------------------------------------------------------------


def parse_front(text: str, name: str = "") -> FrontDiagram:
    """Parse the front file format.

    Header ``components: <n>``, optional ``orient: 1=+,2=-``, then one
    event per line (``L <level>``, ``R <level>``, ``X <level>``).
    ``#`` starts a comment.  Diagrams with more than two components are
    rejected here; internal constructions may exceed that.
    """
    declared: Optional[int] = None
    orient_spec: Dict[int, int] = {}
    events: List[Tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("components:"):
            try:
                declared = int(line.split(":", 1)[1])
            except ValueError:
                raise FrontSyntaxError("bad components header", lineno)
            continue
        if line.startswith("orient:"):
            body = line.split(":", 1)[1].strip()
            for part in body.split(","):
                part = part.strip()
                if not part:
                    continue
                try:
                    idx, sign = part.split("=")
                    orient_spec[int(idx)] = {"+": 1, "-": -1}[sign.strip()]
                except (ValueError, KeyError):
                    raise FrontSyntaxError(f"bad orient entry {part!r}", lineno)
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("L", "R", "X"):
            raise FrontSyntaxError(f"bad event line {line!r}", lineno)
        try:
            level = int(parts[1])
        except ValueError:
            raise FrontSyntaxError(f"bad level in {line!r}", lineno)
        if level < 0:
            raise FrontSyntaxError(f"negative level in {line!r}", lineno)
        events.append((parts[0], level))
    if not events:
        raise FrontSyntaxError("no events in front file")
    trace = Trace(tuple(FrontEvent(k, l) for k, l in events))
    n = trace.n_components
    if declared is not None and declared != n:
        raise FrontTopologyError(
            f"header declares {declared} component(s), diagram has {n}"
        )
    if n > 2:
        raise ComponentCountError(f"at most 2 components supported, got {n}")
    orientations = [1] * n
    for idx, sign in orient_spec.items():
        if not 1 <= idx <= n:
            raise FrontSyntaxError(f"orient index {idx} out of range")
        orientations[idx - 1] = sign
    return make_diagram(events, orientations, name=name)


def serialize_front(d: FrontDiagram) -> str:
    lines = [f"components: {d.n_components}"]
    orient = ",".join(
        f"{i + 1}={'+' if o == 1 else '-'}" for i, o in enumerate(d.orientations)
    )
    lines.append(f"orient: {orient}")
    for ev in d.events:
        lines.append(f"{ev.kind} {ev.level}")
    return "\n".join(lines) + "\n"
