"""Curves as combinatorial crossing data over a fixed triangulation.

A curve is stored as the ordered list of arcs it crosses.  Winding steps
sit between the two crossings of a pending arc and count counterclockwise
turns inside the pocket; corner windings mark an end that runs into the
orbifold point itself.  Arc ends carry plain or notched tags; closed
curves carry a basepoint triangle instead of ends.  Nothing in this
module performs isotopy: the profile IS the curve, and `traversal`
merely replays it through the triangle complex, failing loudly when the
steps do not fit together.

Notched ends are resolved by `resolve_notches`, which rewrites the
profile so every downstream construction sees only plain data plus
gluing markers: a near-revolution around the puncture for generic ends,
and closed companion profiles for the special families (curves lying in
the triangulation, and corner curves notched at the basepoint of their
own pending arc).
"""

from __future__ import annotations

from orbcluster.orbifold import NOTCHED, PLAIN

__all__ = [
    "CROSS",
    "WIND",
    "CORNER_WIND",
    "UP",
    "DOWN",
    "CW",
    "CCW",
    "MIRROR_RELATIONS",
    "ProfileError",
    "Step",
    "End",
    "CrossingProfile",
    "Visit",
    "Marker",
    "HookedProfile",
    "canonicalize_winding",
    "traversal",
    "resolve_notches",
    "relation_direction",
    "side_at",
    "ccw_next",
    "ccw_prev",
    "triangle_vertices",
    "spoke_end_count",
]

CROSS = "cross"
WIND = "wind"
CORNER_WIND = "corner_wind"

UP = "UP"
DOWN = "DOWN"

CW = "cw"
CCW = "ccw"

# Single global switch for the left/right reading of shared corners.  The
# worked posets in the test suite lock the current value; flipping it
# mirrors every relation that relation_direction produces.
MIRROR_RELATIONS = False


class ProfileError(ValueError):
    """Raised when a crossing profile cannot be read against a triangulation."""


class Step:
    """One move of the curve.

    `op` is cross, wind, or corner_wind.  Winding steps carry either the
    canonical counterclockwise count `k` or a raw signed count `kappa`
    that canonicalize_winding folds into range.  k = -1 is tolerated as a
    formal degenerate winding: it only appears in resolver output, where
    the zero-weight scalar attached to it kills the affected terms.
    """

    __slots__ = ("op", "label", "k", "kappa")

    def __init__(self, op, label, k=None, kappa=None):
        if op not in (CROSS, WIND, CORNER_WIND):
            raise ValueError(f"unknown step op {op!r}")
        if op == CROSS:
            if k is not None or kappa is not None:
                raise ValueError("cross steps carry no winding")
        else:
            if (k is None) == (kappa is None):
                raise ValueError("winding steps need exactly one of k, kappa")
            if k is not None and k < -1:
                raise ValueError("canonical winding below the formal floor")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "kappa", kappa)

    def __setattr__(self, *a):
        raise AttributeError("Step is immutable")

    @classmethod
    def cross(cls, label):
        return cls(CROSS, label)

    @classmethod
    def wind(cls, label, k=None, kappa=None):
        return cls(WIND, label, k=k, kappa=kappa)

    @classmethod
    def corner(cls, label, k=None, kappa=None):
        return cls(CORNER_WIND, label, k=k, kappa=kappa)

    @property
    def is_cross(self):
        return self.op == CROSS

    def _key(self):
        return (self.op, self.label, self.k, self.kappa)

    def __eq__(self, other):
        return isinstance(other, Step) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.op == CROSS:
            return f"Step.cross({self.label!r})"
        w = f"k={self.k}" if self.k is not None else f"kappa={self.kappa}"
        return f"Step({self.op}, {self.label!r}, {w})"


class End:
    """A tagged endpoint: the marked point (or orbifold point) and its tag."""

    __slots__ = ("point", "tag")

    def __init__(self, point, tag=PLAIN):
        if tag not in (PLAIN, NOTCHED):
            raise ValueError(f"bad end tag {tag!r}")
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, *a):
        raise AttributeError("End is immutable")

    def _key(self):
        return (self.point, self.tag)

    def __eq__(self, other):
        return isinstance(other, End) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        mark = "" if self.tag == PLAIN else " notched"
        return f"End({self.point!r}{mark})"


class CrossingProfile:
    """Ordered steps of one arc or closed curve.

    Arcs carry a pair of tagged ends; closed curves carry the index of
    the basepoint triangle instead.  A curve that coincides with an arc
    of the triangulation crosses nothing, so it is stored by `base_arc`
    with an empty step list; every other profile must cross something.
    """

    __slots__ = ("kind", "steps", "ends", "basepoint", "base_arc")

    def __init__(self, kind, steps, ends=None, basepoint=None, base_arc=None):
        if kind not in ("arc", "closed"):
            raise ValueError(f"unknown curve kind {kind!r}")
        steps = tuple(steps)
        if any(not isinstance(s, Step) for s in steps):
            raise ValueError("steps must be Step values")
        if kind == "arc":
            if ends is None:
                raise ValueError("arcs need a pair of tagged ends")
            ends = tuple(ends)
            if len(ends) != 2 or any(not isinstance(e, End) for e in ends):
                raise ValueError("ends must be a pair of End values")
            if basepoint is not None:
                raise ValueError("arcs carry no basepoint")
        else:
            if ends is not None:
                raise ValueError("closed curves carry no ends")
            if base_arc is not None:
                raise ValueError("closed curves cannot lie in the triangulation")
            if basepoint is None or not isinstance(basepoint, int):
                raise ValueError("closed curves need a basepoint triangle index")
        if base_arc is not None:
            if steps:
                raise ValueError("a curve lying in the triangulation crosses nothing")
        elif not steps:
            raise ProfileError("curve crosses no arc")
        _check_step_shape(kind, steps)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "ends", ends)
        object.__setattr__(self, "basepoint", basepoint)
        object.__setattr__(self, "base_arc", base_arc)

    def __setattr__(self, *a):
        raise AttributeError("CrossingProfile is immutable")

    @classmethod
    def arc(cls, steps, ends, base_arc=None):
        return cls("arc", steps, ends=ends, base_arc=base_arc)

    @classmethod
    def closed(cls, steps, basepoint):
        return cls("closed", steps, basepoint=basepoint)

    def replaced(self, **kw):
        data = {s: getattr(self, s) for s in self.__slots__}
        data.update(kw)
        return CrossingProfile(**data)

    def cross_indices(self):
        return tuple(i for i, s in enumerate(self.steps) if s.is_cross)

    def reversed(self):
        if self.kind != "arc":
            raise ValueError("only arcs reverse")
        return self.replaced(steps=tuple(reversed(self.steps)),
                             ends=(self.ends[1], self.ends[0]))

    def _key(self):
        return (self.kind, self.steps, self.ends, self.basepoint, self.base_arc)

    def __eq__(self, other):
        return isinstance(other, CrossingProfile) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        inner = ", ".join(repr(s) for s in self.steps)
        tail = f", ends={self.ends!r}" if self.kind == "arc" else f", basepoint={self.basepoint}"
        if self.base_arc is not None:
            tail += f", base_arc={self.base_arc!r}"
        return f"CrossingProfile({self.kind}, [{inner}]{tail})"


def _check_step_shape(kind, steps):
    """Positional rules: winds sit between their two crossings, corners at ends."""
    n = len(steps)
    for i, s in enumerate(steps):
        if s.op == WIND:
            ok = (0 < i < n - 1
                  and steps[i - 1].op == CROSS and steps[i - 1].label == s.label
                  and steps[i + 1].op == CROSS and steps[i + 1].label == s.label)
            if not ok:
                raise ProfileError(
                    f"step {i}: winding must sit between two crossings of {s.label!r}")
        elif s.op == CORNER_WIND:
            if kind == "closed":
                raise ProfileError("closed curves have no corner windings")
            if i == 0:
                ok = n > 1 and steps[1].op == CROSS and steps[1].label == s.label
            elif i == n - 1:
                ok = steps[i - 1].op == CROSS and steps[i - 1].label == s.label
            else:
                ok = False
            if not ok:
                raise ProfileError(
                    f"step {i}: corner winding must open or close the profile, "
                    f"next to a crossing of {s.label!r}")


# ----------------------------------------------------------------------
# side bookkeeping helpers shared with the expansion engines

def side_at(tri, ti, si):
    """(label, direction) of one side slot."""
    return tri.triangles[ti].sides[si]


def ccw_next(tri, ti, si):
    return (si + 1) % len(tri.triangles[ti].sides)


def ccw_prev(tri, ti, si):
    return (si - 1) % len(tri.triangles[ti].sides)


def triangle_vertices(tri, ti):
    out = set()
    for s in tri.triangles[ti].sides:
        out.add(tri.side_head(s))
        out.add(tri.side_tail(s))
    return out


def spoke_end_count(tri, point):
    """Arc ends meeting the point, loops counted twice."""
    n = 0
    for arc in tri.arcs.values():
        if arc.is_interior:
            n += list(arc.endpoints).count(point)
    return n


def _slot_of(tri, ti, label, *, forbid=None):
    sides = tri.triangles[ti].sides
    hits = [j for j, (lab, _) in enumerate(sides) if lab == label and j != forbid]
    return hits


def _other_slot(tri, ti, si):
    lab = tri.triangles[ti].sides[si][0]
    slots = tri._adj.get(lab, ())
    if len(slots) != 2:
        raise ProfileError(f"arc {lab!r} has no second face to cross into")
    for t2, s2 in slots:
        if (t2, s2) != (ti, si):
            return t2, s2
    raise ProfileError(f"arc {lab!r}: inconsistent face adjacency")


def _corners_at(tri, ti, point):
    """Side slots i such that sides[i] and sides[i+1] meet at the point."""
    sides = tri.triangles[ti].sides
    n = len(sides)
    return [i for i in range(n)
            if tri.side_head(sides[i]) == point
            and tri.side_tail(sides[(i + 1) % n]) == point]


def relation_direction(tri, ti, entry, exit, *, entry_slot=None, exit_slot=None):
    """Orientation of the poset relation across one shared face.

    DOWN when the exit side immediately follows the entry side in the
    face's counterclockwise side order (shared corner on the right of
    the curve); UP otherwise.  Pass slots explicitly when the face
    repeats a label.
    """
    sides = tri.triangles[ti].sides
    n = len(sides)
    if entry_slot is None:
        hits = _slot_of(tri, ti, entry)
        if len(hits) != 1:
            raise ProfileError(
                f"side {entry!r} is not unique in face {ti}; pass entry_slot")
        entry_slot = hits[0]
    if exit_slot is None:
        hits = [j for j in _slot_of(tri, ti, exit) if j != entry_slot]
        if len(hits) != 1:
            raise ProfileError(
                f"side {exit!r} is not unique in face {ti}; pass exit_slot")
        exit_slot = hits[0]
    if entry_slot == exit_slot:
        raise ProfileError("entry and exit sides coincide outside a pocket")
    down = (entry_slot + 1) % n == exit_slot
    if MIRROR_RELATIONS:
        down = not down
    return DOWN if down else UP


# ----------------------------------------------------------------------
# winding normalization

def canonicalize_winding(profile, tri):
    """Fold raw signed winding counts into counterclockwise normal form.

    A raw count kappa is read modulo the orbifold order p; zero is a
    collapsed passage and rejected, anything else lands in {0..p-2} via
    k = (kappa mod p) - 1.  Already-canonical steps pass through, so the
    map is idempotent.
    """
    out = []
    changed = False
    for i, s in enumerate(profile.steps):
        if s.op == CROSS:
            out.append(s)
            continue
        arc = tri.arcs.get(s.label)
        if arc is None or arc.kind != "pending":
            raise ProfileError(f"step {i}: winding at non-pending arc {s.label!r}")
        p = arc.order
        if s.k is not None:
            if not (-1 <= s.k <= p - 2):
                raise ProfileError(f"step {i}: winding {s.k} outside 0..{p - 2}")
            out.append(s)
            continue
        m = s.kappa % p
        if m == 0:
            raise ProfileError(
                f"step {i}: signed winding {s.kappa} is divisible by the order {p}")
        out.append(Step(s.op, s.label, k=m - 1))
        changed = True
    if not changed:
        return profile
    return profile.replaced(steps=tuple(out))


# ----------------------------------------------------------------------
# traversal: replay the profile through the triangle complex

class Visit:
    """One face traversal: which face, and the step indices in and out.

    entry/exit are indices into profile.steps (None at open ends);
    entry_slot/exit_slot are the side slots used.  `wind` carries k for
    pocket visits.
    """

    __slots__ = ("triangle", "entry", "exit", "entry_slot", "exit_slot", "wind")

    def __init__(self, triangle, entry, exit, entry_slot, exit_slot, wind=None):
        object.__setattr__(self, "triangle", triangle)
        object.__setattr__(self, "entry", entry)
        object.__setattr__(self, "exit", exit)
        object.__setattr__(self, "entry_slot", entry_slot)
        object.__setattr__(self, "exit_slot", exit_slot)
        object.__setattr__(self, "wind", wind)

    def __setattr__(self, *a):
        raise AttributeError("Visit is immutable")

    def _key(self):
        return (self.triangle, self.entry, self.exit,
                self.entry_slot, self.exit_slot, self.wind)

    def __eq__(self, other):
        return isinstance(other, Visit) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        w = f", wind={self.wind}" if self.wind is not None else ""
        return (f"Visit(tri={self.triangle}, in={self.entry}@{self.entry_slot}, "
                f"out={self.exit}@{self.exit_slot}{w})")


def _semantic_checks(profile, tri):
    for i, s in enumerate(profile.steps):
        arc = tri.arcs.get(s.label)
        if arc is None:
            raise ProfileError(f"step {i}: unknown arc {s.label!r}")
        if s.op == CROSS:
            if not arc.is_interior:
                raise ProfileError(f"step {i}: crosses boundary segment {s.label!r}")
        else:
            if arc.kind != "pending":
                raise ProfileError(f"step {i}: winding at non-pending arc {s.label!r}")
            if s.k is None:
                raise ProfileError(f"step {i}: winding not canonical; "
                                   "apply canonicalize_winding first")
            if not (-1 <= s.k <= arc.order - 2):
                raise ProfileError(f"step {i}: winding {s.k} outside 0..{arc.order - 2}")
    if profile.kind == "arc":
        for e in profile.ends:
            if e.tag == NOTCHED and e.point not in tri.punctures:
                raise ProfileError(f"notched end at non-puncture {e.point!r}")
    else:
        bp = profile.basepoint
        if not (0 <= bp < len(tri.triangles)):
            raise ProfileError(f"basepoint {bp} out of range")
        if tri.triangles[bp].kind != "ordinary":
            raise ProfileError("closed-curve basepoint must lie in an ordinary face")
    if profile.base_arc is not None and profile.base_arc not in tri.arcs:
        raise ProfileError(f"unknown base arc {profile.base_arc!r}")


def _pick_repeat_slot(face, ins, cand):
    # repeated label (self-folded radius): take the ccw-next slot when we can
    if ins is not None and (ins + 1) % len(face.sides) in cand:
        return (ins + 1) % len(face.sides)
    return cand[0]


def _monogon_of(tri, rho):
    for ti, _ in tri._adj.get(rho, ()):
        if tri.triangles[ti].kind == "pending":
            return ti
    raise ProfileError(f"{rho!r} has no pocket face")


def _attempt_walk(profile, tri, start_ti):
    steps = profile.steps
    visits = []
    t, ins = start_ti, None
    entry_idx = None
    held_wind = None
    i = 0
    if steps[0].op == CORNER_WIND:
        held_wind = steps[0].k
        i = 1
    last = len(steps) - 1
    while i <= last:
        s = steps[i]
        if s.op == CORNER_WIND:
            # shape rules put this only at the tail
            break
        face = tri.triangles[t]
        if s.op == WIND:
            if face.kind != "pending":
                raise ProfileError(f"step {i}: winding outside a pocket")
            if held_wind is not None:
                raise ProfileError(f"step {i}: second winding in one pocket visit")
            held_wind = s.k
            i += 1
            continue
        if face.kind == "pending" and held_wind is None:
            raise ProfileError(
                f"step {i}: pocket passage needs an explicit winding step")
        # a pocket has a single side, crossed both in and out
        forbid = ins if face.kind != "pending" else None
        cand = _slot_of(tri, t, s.label, forbid=forbid)
        if not cand:
            raise ProfileError(
                f"step {i}: {s.label!r} does not bound the current face")
        j = cand[0] if len(cand) == 1 else _pick_repeat_slot(face, ins, cand)
        visits.append(Visit(t, entry_idx, i, ins, j, held_wind))
        held_wind = None
        t, ins = _other_slot(tri, t, j)
        entry_idx = i
        i += 1

    face = tri.triangles[t]
    final_wind = None
    if steps[last].op == CORNER_WIND and last > 0:
        if face.kind != "pending":
            raise ProfileError("corner winding must close inside a pocket")
        final_wind = steps[last].k
    elif face.kind == "pending":
        raise ProfileError("curve ends inside a pocket without a corner winding")
    if held_wind is not None:
        raise ProfileError("winding without a second crossing")

    if profile.kind == "closed":
        if t != profile.basepoint:
            raise ProfileError("closed curve does not return to its basepoint")
        first = visits[0]
        if ins == first.exit_slot:
            raise ProfileError("closed curve backtracks across its last arc")
        visits[0] = Visit(first.triangle, entry_idx, first.exit,
                          ins, first.exit_slot, None)
        return tuple(visits)

    visits.append(Visit(t, entry_idx, None, ins, None, final_wind))
    want = profile.ends[1].point
    if steps[last].op == CORNER_WIND:
        rho = tri.arcs[steps[last].label]
        if want != rho.orbifold_point:
            raise ProfileError(
                f"corner end should sit at {rho.orbifold_point!r}, not {want!r}")
    elif want not in triangle_vertices(tri, t):
        raise ProfileError(f"end point {want!r} is not a corner of the final face")
    return tuple(visits)


def traversal(profile, tri):
    """Faces visited by the profile, in order, with entry/exit slots.

    Arcs yield one visit per face from start to finish; closed curves
    yield one visit per crossing with the basepoint face first.  Raises
    ProfileError when the steps cannot be replayed.
    """
    _semantic_checks(profile, tri)
    if profile.base_arc is not None:
        return ()
    steps = profile.steps
    first = steps[0]

    if profile.kind == "closed":
        starts = [profile.basepoint]
        if not _slot_of(tri, profile.basepoint, first.label):
            raise ProfileError("first crossing does not bound the basepoint face")
    elif first.op == CORNER_WIND:
        rho = tri.arcs[first.label]
        if profile.ends[0].point != rho.orbifold_point:
            raise ProfileError(
                f"corner start should sit at {rho.orbifold_point!r}")
        starts = [_monogon_of(tri, first.label)]
    else:
        p0 = profile.ends[0].point
        slots = tri._adj.get(first.label, ())
        starts = []
        for ti, _ in slots:
            if p0 in triangle_vertices(tri, ti) and ti not in starts:
                starts.append(ti)
        if not starts:
            raise ProfileError(
                f"start point {p0!r} touches no face bounded by {first.label!r}")

    results = []
    errors = []
    for ti in starts:
        try:
            results.append(_attempt_walk(profile, tri, ti))
        except ProfileError as e:
            errors.append(str(e))
    uniq = []
    for r in results:
        if r not in uniq:
            uniq.append(r)
    if not uniq:
        raise ProfileError(errors[-1] if errors else "profile does not fit")
    if len(uniq) > 1:
        raise ProfileError("ambiguous profile: two distinct traversals fit")
    return uniq[0]


# ----------------------------------------------------------------------
# notch resolution

class Marker:
    """Bookkeeping for one resolved notch or special closed companion.

    mode is one of hook, loop_partner, band_double, pending_band,
    pending_notched, notch_corner.  For hooks, span = (lo, hi) step
    range of the inserted revolution, partner the adjacent original
    crossing, glue_label the edge identified between the two flanking
    tiles, and closure the (triangle, entry step, exit step, entry slot,
    exit slot) data for the extra poset relation.  roles maps structural
    names to step indices for the closed companion modes.
    """

    __slots__ = ("mode", "end", "puncture", "direction", "span", "partner",
                 "glue_label", "closure", "roles")

    def __init__(self, mode, end=None, puncture=None, direction=None,
                 span=None, partner=None, glue_label=None, closure=None,
                 roles=None):
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "end", end)
        object.__setattr__(self, "puncture", puncture)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "span", span)
        object.__setattr__(self, "partner", partner)
        object.__setattr__(self, "glue_label", glue_label)
        object.__setattr__(self, "closure", closure)
        object.__setattr__(self, "roles", dict(roles) if roles else {})

    def __setattr__(self, *a):
        raise AttributeError("Marker is immutable")

    def __repr__(self):
        bits = [self.mode]
        if self.end is not None:
            bits.append(f"end={self.end}")
        if self.puncture is not None:
            bits.append(f"at {self.puncture!r}")
        if self.span is not None:
            bits.append(f"span={self.span}")
        if self.glue_label is not None:
            bits.append(f"glue={self.glue_label!r}")
        return "Marker(" + ", ".join(bits) + ")"


class HookedProfile:
    """A profile with notches resolved, plus its markers and the original."""

    __slots__ = ("profile", "markers", "source")

    def __init__(self, profile, markers, source):
        object.__setattr__(self, "profile", profile)
        object.__setattr__(self, "markers", tuple(markers))
        object.__setattr__(self, "source", source)

    def __setattr__(self, *a):
        raise AttributeError("HookedProfile is immutable")

    def __repr__(self):
        return f"HookedProfile({self.profile!r}, markers={self.markers!r})"


def _next_corner(tri, ti, arrived_slot, point, direction):
    corners = _corners_at(tri, ti, point)
    n = len(tri.triangles[ti].sides)
    if direction == CCW:
        want = [c for c in corners if (c + 1) % n == arrived_slot]
    else:
        want = [c for c in corners if c == arrived_slot]
    if len(want) != 1:
        raise ProfileError(
            f"revolution around {point!r} loses its corner in face {ti}")
    return want[0]


def _revolution(tri, point, start_ti, start_corner, direction):
    """Steps of one near-revolution, plus slot annotations.

    Returns (steps, first_slot, last_slot) where the slots locate the
    first and last crossings inside the start face.  Pocket passages
    are emitted as cross/wind(0)/cross triples.
    """
    steps = []
    first_slot = None
    cur_ti, cur_c = start_ti, start_corner
    budget = 4 * max(1, len(tri.triangles)) + 8
    while budget:
        budget -= 1
        sides = tri.triangles[cur_ti].sides
        n = len(sides)
        j = cur_c if direction == CCW else (cur_c + 1) % n
        lab = sides[j][0]
        if first_slot is None:
            first_slot = j
        t2, s2 = _other_slot(tri, cur_ti, j)
        if tri.triangles[t2].kind == "pending":
            steps.append(Step.cross(lab))
            steps.append(Step.wind(lab, k=0))
            steps.append(Step.cross(lab))
            arrive = (cur_ti, j)
        else:
            steps.append(Step.cross(lab))
            arrive = (t2, s2)
        cur_ti = arrive[0]
        cur_c = _next_corner(tri, cur_ti, arrive[1], point, direction)
        if (cur_ti, cur_c) == (start_ti, start_corner):
            crossings = sum(1 for s in steps if s.is_cross)
            if crossings != spoke_end_count(tri, point):
                raise ProfileError(
                    f"revolution around {point!r} crossed {crossings} ends, "
                    f"expected {spoke_end_count(tri, point)}")
            return steps, first_slot, arrive[1]
    raise ProfileError(f"revolution around {point!r} does not close")


def _start_corner(tri, ti, point, avoid_slot):
    corners = _corners_at(tri, ti, point)
    if not corners:
        raise ProfileError(f"face {ti} has no corner at {point!r}")
    if len(corners) == 1:
        return corners[0]
    n = len(tri.triangles[ti].sides)
    away = [c for c in corners if avoid_slot not in (c, (c + 1) % n)]
    return away[0] if away else corners[0]


def _beside_corner(tri, ti, si, point, direction):
    """Corner at the point flanking slot si, oriented so the walk leaves it."""
    n = len(tri.triangles[ti].sides)
    corners = _corners_at(tri, ti, point)
    if direction == CCW:
        want = [c for c in corners if (c + 1) % n == si]
    else:
        want = [c for c in corners if c == si]
    if len(want) != 1:
        raise ProfileError(
            f"no corner beside slot {si} of face {ti} at {point!r}")
    return want[0]


def _partner_walk(tri, gamma_slot, point, direction):
    """Revolution skipping the arc at gamma_slot: crossings of its companion loop.

    gamma_slot = (ti, si) locates one end of the skipped arc in a face at
    the point.  The walk starts beside that slot and stops when the next
    crossing would be the skipped arc again, so it covers exactly the
    other spoke ends.
    """
    ti, si = gamma_slot
    steps = []
    cur_ti = ti
    cur_c = _beside_corner(tri, ti, si, point, direction)
    budget = 4 * max(1, len(tri.triangles)) + 8
    gamma = tri.triangles[ti].sides[si][0]
    while budget:
        budget -= 1
        sides = tri.triangles[cur_ti].sides
        n = len(sides)
        j = cur_c if direction == CCW else (cur_c + 1) % n
        lab = sides[j][0]
        if lab == gamma:
            return steps, (cur_ti, j)
        t2, s2 = _other_slot(tri, cur_ti, j)
        if tri.triangles[t2].kind == "pending":
            steps.append(Step.cross(lab))
            steps.append(Step.wind(lab, k=0))
            steps.append(Step.cross(lab))
            arrive = (cur_ti, j)
        else:
            steps.append(Step.cross(lab))
            arrive = (t2, s2)
        cur_ti = arrive[0]
        cur_c = _next_corner(tri, cur_ti, arrive[1], point, direction)
    raise ProfileError(f"companion walk around {point!r} does not close")


def _resolve_in_triangulation(profile, tri, start, end):
    gamma = profile.base_arc
    arc = tri.arcs[gamma]
    tags = [e.tag for e in profile.ends]
    points = [e.point for e in profile.ends]
    if set(points) != set(arc.endpoints):
        raise ProfileError(f"profile ends do not match arc {gamma!r}")
    notched = [i for i, t in enumerate(tags) if t == NOTCHED]

    if arc.kind == "pending":
        # companion closed curve through the other spokes at the basepoint
        q = arc.endpoints[0]
        encl = next(ti for ti, _ in tri._adj[gamma]
                    if tri.triangles[ti].kind == "ordinary")
        gslot = next((ti, si) for ti, si in tri._adj[gamma] if ti == encl)
        if len(notched) == 1:
            steps, _ = _partner_walk(tri, gslot, q, start)
            closed = CrossingProfile.closed(steps, basepoint=encl)
            marker = Marker("pending_notched", end=notched[0], puncture=q,
                            direction=start, roles={"rho": gamma})
            return HookedProfile(closed, (marker,), profile)
        # doubly notched: two revolutions joined by pocket passes with
        # windings 1 and 0
        rev, _ = _partner_walk(tri, gslot, q, start)
        pocket_one = [Step.cross(gamma), Step.wind(gamma, k=1), Step.cross(gamma)]
        pocket_zero = [Step.cross(gamma), Step.wind(gamma, k=0), Step.cross(gamma)]
        steps = rev + pocket_one + rev + pocket_zero
        m = len(rev)
        roles = {"rho_l": m, "rho_r": m + 2,
                 "rho_plus": 2 * m + 3, "rho_minus": 2 * m + 5, "rho": gamma}
        closed = CrossingProfile.closed(steps, basepoint=encl)
        marker = Marker("pending_band", puncture=q, direction=start, roles=roles)
        return HookedProfile(closed, (marker,), profile)

    if arc.endpoints[0] == arc.endpoints[1] and len(notched) == 1:
        raise ProfileError("the two ends of a loop must carry matching tags")

    if len(notched) == 1:
        p = points[notched[0]]
        z = arc.endpoints[0] if arc.endpoints[1] == p else arc.endpoints[1]
        slots = [(ti, si) for ti, si in tri._adj[gamma]]
        # walk from the corner beside the notched end
        gslot = None
        for ti, si in slots:
            if p in (tri.side_head(tri.triangles[ti].sides[si]),
                     tri.side_tail(tri.triangles[ti].sides[si])):
                try:
                    _beside_corner(tri, ti, si, p, start)
                except ProfileError:
                    continue
                gslot = (ti, si)
                break
        if gslot is None:
            raise ProfileError(f"arc {gamma!r} has no corner at {p!r}")
        steps, _ = _partner_walk(tri, gslot, p, start)
        loop = CrossingProfile.arc(steps, (End(z), End(z)))
        marker = Marker("loop_partner", end=notched[0], puncture=p,
                        direction=start, glue_label=gamma)
        return HookedProfile(loop, (marker,), profile)

    # doubly notched standard arc: closed band crossing gamma twice
    p, q = points
    slots = list(tri._adj[gamma])
    gslot_p = None
    for ti, si in slots:
        try:
            _beside_corner(tri, ti, si, p, start)
        except ProfileError:
            continue
        gslot_p = (ti, si)
        break
    if gslot_p is None:
        raise ProfileError(f"arc {gamma!r} has no corner at {p!r}")
    rev_p, stop_p = _partner_walk(tri, gslot_p, p, start)
    # after crossing gamma we sit in the other face; revolve around q from
    # there.  Which handedness works is forced by the face we landed in,
    # so it is detected rather than taken from the caller.
    t_b, s_b = stop_p
    t_a, s_a = _other_slot(tri, t_b, s_b)
    try:
        rev_q, stop_q = _partner_walk(tri, (t_a, s_a), q, end)
    except ProfileError:
        other = CW if end == CCW else CCW
        rev_q, stop_q = _partner_walk(tri, (t_a, s_a), q, other)
    steps = rev_p + [Step.cross(gamma)] + rev_q + [Step.cross(gamma)]
    basepoint = t_a
    roles = {"gamma_a": len(rev_p), "gamma_b": len(steps) - 1, "gamma": gamma}
    closed = CrossingProfile.closed(steps, basepoint=basepoint)
    marker = Marker("band_double", puncture=p, direction=start, roles=roles)
    return HookedProfile(closed, (marker,), profile)


def _resolve_notch_corner(profile, tri, direction):
    """Corner curve notched at the basepoint of its own pending arc.

    The hook revolution merges with the corner winding into a cyclic
    companion: around the fan once, then through the pocket with winding
    k-1 and again with winding k, the middle crossing shared between the
    two passages.  Because of that sharing the cycle is a formal object:
    it encodes the glued tile cycle and must not be fed to traversal.
    Only the single-crossing shape is supported; anything longer has no
    pinned construction here.
    """
    prof = profile if profile.steps[0].op == CORNER_WIND else profile.reversed()
    if len(prof.steps) != 2:
        raise ProfileError(
            "notched corner curves with extra crossings are not supported")
    k = prof.steps[0].k
    rho = prof.steps[0].label
    point = prof.ends[1].point
    encl = next(ti for ti, _ in tri._adj[rho]
                if tri.triangles[ti].kind == "ordinary")
    gslot = next((ti, si) for ti, si in tri._adj[rho] if ti == encl)
    sigma, _ = _partner_walk(tri, gslot, point, direction)
    steps = (tuple(sigma)
             + (Step.cross(rho), Step.wind(rho, k=k - 1), Step.cross(rho),
                Step.wind(rho, k=k), Step.cross(rho)))
    n = len(sigma)
    roles = {"rho_plus": n, "v1": n + 2, "rho_minus": n + 4,
             "rho": rho, "k": k}
    closed = CrossingProfile.closed(steps, basepoint=encl)
    marker = Marker("notch_corner", end=1, puncture=point,
                    direction=direction, roles=roles)
    return HookedProfile(closed, (marker,), profile)


def resolve_notches(profile, tri, start=CW, end=CW):
    """Rewrite notched ends as near-revolutions with gluing markers.

    `start` and `end` choose the orientation of the hook at each end.
    Plain profiles come back unchanged.  Curves lying in the
    triangulation and corner curves notched at their own pending
    basepoint produce closed companion profiles instead of hooks.
    """
    if start not in (CW, CCW) or end not in (CW, CCW):
        raise ValueError("hook directions must be cw or ccw")
    _semantic_checks(profile, tri)
    if profile.kind == "closed":
        return HookedProfile(profile, (), profile)
    tags = [e.tag for e in profile.ends]
    if NOTCHED not in tags:
        return HookedProfile(profile, (), profile)
    for e in profile.ends:
        if e.tag == NOTCHED and e.point not in tri.punctures:
            raise ProfileError(f"notched end at non-puncture {e.point!r}")

    if profile.base_arc is not None:
        return _resolve_in_triangulation(profile, tri, start, end)

    if profile.ends[0].point == profile.ends[1].point and tags[0] != tags[1]:
        raise ProfileError("the two ends of a loop must carry matching tags")
    # a standard crossing right next to its own notched puncture can be
    # rotated away around that puncture, so the profile is not reduced
    for idx in (0, 1):
        if tags[idx] != NOTCHED:
            continue
        nearest = profile.steps[0 if idx == 0 else -1]
        if nearest.op != CROSS:
            continue
        arc = tri.arcs[nearest.label]
        if arc.kind == "standard" and profile.ends[idx].point in arc.endpoints:
            raise ProfileError(
                f"crossing {nearest.label!r} next to the notched end at "
                f"{profile.ends[idx].point!r}: profile is not in reduced position")

    visits = traversal(profile, tri)
    steps = profile.steps

    has_corner = steps[0].op == CORNER_WIND or steps[-1].op == CORNER_WIND
    if has_corner:
        corner_step = steps[0] if steps[0].op == CORNER_WIND else steps[-1]
        corner_at_start = steps[0].op == CORNER_WIND
        notch_idx = tags.index(NOTCHED)
        rho = tri.arcs[corner_step.label]
        base = rho.endpoints[0]
        if tags.count(NOTCHED) == 1 and profile.ends[notch_idx].point == base \
                and corner_at_start == (notch_idx == 1):
            direction = end if notch_idx == 1 else start
            return _resolve_notch_corner(profile, tri, direction)

    new_steps = list(steps)
    markers = []
    offset = 0

    if tags[0] == NOTCHED:
        p0 = profile.ends[0].point
        first = visits[0]
        corner = _start_corner(tri, first.triangle, p0, first.exit_slot)
        rev, first_slot, last_slot = _revolution(
            tri, p0, first.triangle, corner, start)
        new_steps = rev + new_steps
        offset = len(rev)
        partner = offset
        closure = (first.triangle, 0, partner, first_slot, first.exit_slot)
        markers.append(Marker(
            "hook", end=0, puncture=p0, direction=start,
            span=(0, offset - 1), partner=partner,
            glue_label=rev[-1].label, closure=closure))

    if tags[1] == NOTCHED:
        p1 = profile.ends[1].point
        last = visits[-1]
        corner = _start_corner(tri, last.triangle, p1, last.entry_slot)
        rev, first_slot, last_slot = _revolution(
            tri, p1, last.triangle, corner, end)
        lo = len(new_steps)
        partner = offset + last.entry
        new_steps = new_steps + rev
        closure = (last.triangle, partner, len(new_steps) - 1,
                   last.entry_slot, last_slot)
        markers.append(Marker(
            "hook", end=1, puncture=p1, direction=end,
            span=(lo, len(new_steps) - 1), partner=partner,
            glue_label=rev[0].label, closure=closure))

    plain_ends = (End(profile.ends[0].point), End(profile.ends[1].point))
    hooked = CrossingProfile.arc(tuple(new_steps), plain_ends)
    return HookedProfile(hooked, tuple(markers), profile)
