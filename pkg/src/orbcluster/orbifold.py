"""Triangulated punctured orbifolds: arcs, triangles, validation, and flips.

Triangulations are stored in tagged form.  A notched arc appears either as
one half of a notched/plain pair on the same endpoints (recorded by a
self-folded triangle: the notched member is drawn as the loop, the plain one
as the radius it encloses) or at a puncture where every incident end is
notched (the triangle list then looks exactly like the plain picture).
Triangle sides are directed, chaining head-to-tail counterclockwise; the
directions remove every ambiguity about which corner two sides share,
including bigons whose two sides connect the same pair of points.
"""

from __future__ import annotations

import numpy as np

from orbcluster.laurent import VarTable

__all__ = [
    "PLAIN",
    "NOTCHED",
    "Arc",
    "Triangle",
    "Triangulation",
    "TriangulationError",
    "FlipError",
]

PLAIN = "plain"
NOTCHED = "notched"

_ARC_KINDS = ("standard", "pending", "boundary")
_TRI_KINDS = ("ordinary", "pending", "self_folded")


class TriangulationError(ValueError):
    """Raised when a triangulation fails its structural checks."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class FlipError(ValueError):
    """Raised for flips of boundary arcs or unsupported configurations."""


def _toggle(tag):
    return NOTCHED if tag == PLAIN else PLAIN


class Arc:
    """One tagged arc or boundary segment.

    `endpoints` are marked-point ids (equal for pending arcs).  `tags` give
    the decoration at each endpoint slot.  Pending arcs also record the
    orbifold point they enclose and its order p.
    """

    __slots__ = ("label", "kind", "endpoints", "tags", "orbifold_point", "order")

    def __init__(self, label, kind, endpoints, tags=(PLAIN, PLAIN),
                 orbifold_point=None, order=None):
        if kind not in _ARC_KINDS:
            raise ValueError(f"unknown arc kind {kind!r}")
        endpoints = tuple(endpoints)
        tags = tuple(tags)
        if len(endpoints) != 2:
            raise ValueError(f"arc {label!r}: need exactly two endpoints")
        if len(tags) != 2 or any(t not in (PLAIN, NOTCHED) for t in tags):
            raise ValueError(f"arc {label!r}: bad tags {tags!r}")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "endpoints", endpoints)
        object.__setattr__(self, "tags", tags)
        object.__setattr__(self, "orbifold_point", orbifold_point)
        object.__setattr__(self, "order", order)

    def __setattr__(self, *a):
        raise AttributeError("Arc is immutable")

    def replaced(self, **kw):
        data = {s: getattr(self, s) for s in self.__slots__}
        data.update(kw)
        return Arc(**data)

    def tag_at(self, point):
        """Tag at the (unique-point) endpoint `point`; loops must match both."""
        if self.endpoints[0] == point and self.endpoints[1] == point:
            if self.tags[0] != self.tags[1]:
                raise ValueError(f"arc {self.label!r}: ambiguous tag at {point!r}")
            return self.tags[0]
        for e, t in zip(self.endpoints, self.tags):
            if e == point:
                return t
        raise ValueError(f"arc {self.label!r} does not end at {point!r}")

    @property
    def is_interior(self):
        return self.kind != "boundary"

    def _key(self):
        return (self.label, self.kind, self.endpoints, self.tags,
                self.orbifold_point, self.order)

    def __eq__(self, other):
        return isinstance(other, Arc) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        bits = [f"{self.label!r}", self.kind, f"{self.endpoints[0]!r}-{self.endpoints[1]!r}"]
        if NOTCHED in self.tags:
            bits.append("tags=" + "/".join(self.tags))
        if self.kind == "pending":
            bits.append(f"around {self.orbifold_point!r} (p={self.order})")
        return "Arc(" + ", ".join(bits) + ")"


class Triangle:
    """A face of the triangulation.

    `sides` is a tuple of (arc label, direction) pairs in counterclockwise
    order; direction +1 traverses the arc from endpoints[0] to endpoints[1].
    Ordinary faces have three sides, pending monogons one (the pending arc),
    self-folded faces three: the loop once and the radius twice.
    """

    __slots__ = ("kind", "sides", "puncture")

    def __init__(self, kind, sides, puncture=None):
        if kind not in _TRI_KINDS:
            raise ValueError(f"unknown triangle kind {kind!r}")
        sides = tuple((lab, int(d)) for lab, d in sides)
        if any(d not in (1, -1) for _, d in sides):
            raise ValueError("side directions must be +1 or -1")
        if kind == "ordinary" and len(sides) != 3:
            raise ValueError("ordinary triangles have three sides")
        if kind == "pending" and len(sides) != 1:
            raise ValueError("pending monogons have one side")
        if kind == "self_folded":
            if len(sides) != 3 or puncture is None:
                raise ValueError("self-folded triangles: three sides and a puncture")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "puncture", puncture)

    def __setattr__(self, *a):
        raise AttributeError("Triangle is immutable")

    @classmethod
    def ordinary(cls, *sides):
        return cls("ordinary", sides)

    @classmethod
    def monogon(cls, rho):
        return cls("pending", ((rho, 1),))

    @classmethod
    def self_folded(cls, loop, radius, puncture, radius_forward=1):
        sides = ((loop, 1), (radius, radius_forward), (radius, -radius_forward))
        return cls("self_folded", sides, puncture=puncture)

    @property
    def labels(self):
        return tuple(lab for lab, _ in self.sides)

    @property
    def loop(self):
        if self.kind != "self_folded":
            raise ValueError("loop: not a self-folded triangle")
        counts = {}
        for lab in self.labels:
            counts[lab] = counts.get(lab, 0) + 1
        for lab, c in counts.items():
            if c == 1:
                return lab
        raise ValueError("self-folded triangle without a unique loop side")

    @property
    def radius(self):
        if self.kind != "self_folded":
            raise ValueError("radius: not a self-folded triangle")
        loop = self.loop
        for lab in self.labels:
            if lab != loop:
                return lab
        raise ValueError("self-folded triangle without a radius")

    def canonical(self):
        rots = [self.sides[i:] + self.sides[:i] for i in range(len(self.sides))]
        return (self.kind, min(rots), self.puncture)

    def __eq__(self, other):
        return isinstance(other, Triangle) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        inner = " ".join(f"{lab}{'+' if d > 0 else '-'}" for lab, d in self.sides)
        extra = f" @{self.puncture!r}" if self.kind == "self_folded" else ""
        return f"Triangle[{self.kind}: {inner}{extra}]"


class Triangulation:
    """Immutable tagged triangulation of a punctured orbifold."""

    __slots__ = ("arcs", "triangles", "punctures", "orbifold_points",
                 "_adj", "_loop_sf", "_radius_sf", "_diag")

    def __init__(self, arcs, triangles, punctures=(), orbifold_points=None):
        arc_map = {}
        for a in arcs:
            if a.label in arc_map:
                raise TriangulationError([f"duplicate arc label {a.label!r}"])
            arc_map[a.label] = a
        object.__setattr__(self, "arcs", arc_map)
        object.__setattr__(self, "triangles", tuple(triangles))
        object.__setattr__(self, "punctures", frozenset(punctures))
        object.__setattr__(self, "orbifold_points", dict(orbifold_points or {}))
        adj = {}
        loop_sf = {}
        radius_sf = {}
        for ti, tri in enumerate(self.triangles):
            for si, (lab, _) in enumerate(tri.sides):
                adj.setdefault(lab, []).append((ti, si))
            if tri.kind == "self_folded":
                loop_sf[tri.loop] = ti
                radius_sf[tri.radius] = ti
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_loop_sf", loop_sf)
        object.__setattr__(self, "_radius_sf", radius_sf)
        object.__setattr__(self, "_diag", None)

    def __setattr__(self, *a):
        raise AttributeError("Triangulation is immutable")

    # ------------------------------------------------------------------
    # basic geometry helpers

    def ideal_endpoints(self, label):
        """Endpoints of the side as drawn: loops of self-folded triangles
        run base-to-base even though the tagged arc ends at the puncture."""
        arc = self.arcs[label]
        if label in self._loop_sf:
            p = self.triangles[self._loop_sf[label]].puncture
            base = arc.endpoints[0] if arc.endpoints[1] == p else arc.endpoints[1]
            return (base, base)
        return arc.endpoints

    def side_tail(self, side):
        lab, d = side
        ends = self.ideal_endpoints(lab)
        return ends[0] if d > 0 else ends[1]

    def side_head(self, side):
        lab, d = side
        ends = self.ideal_endpoints(lab)
        return ends[1] if d > 0 else ends[0]

    def interior_labels(self):
        return tuple(lab for lab, a in self.arcs.items() if a.is_interior)

    def boundary_labels(self):
        return tuple(lab for lab, a in self.arcs.items() if not a.is_interior)

    def degree(self, label):
        """Exchange-polynomial degree: 2 at pending arcs, 1 otherwise."""
        return 2 if self.arcs[label].kind == "pending" else 1

    def degree_vector(self):
        return np.array([self.degree(l) for l in self.interior_labels()], dtype=int)

    def puncture_tag_state(self, point):
        """'plain', 'notched', or 'pair' for the ends meeting this puncture."""
        ends = []
        for arc in self.arcs.values():
            for i, e in enumerate(arc.endpoints):
                if e == point:
                    ends.append((arc, i))
        if not ends:
            return "plain"
        tags = {arc.tags[i] for arc, i in ends}
        if tags == {PLAIN}:
            return "plain"
        if tags == {NOTCHED}:
            return "notched"
        if len(ends) == 2:
            (a1, i1), (a2, i2) = ends
            if (set(a1.endpoints) == set(a2.endpoints)
                    and a1.tags[i1] != a2.tags[i2]):
                return "pair"
        return "mixed"

    # ------------------------------------------------------------------
    # validation

    def validate(self):
        """Structural diagnostics; empty list means the triangulation is ok."""
        if self._diag is not None:
            return list(self._diag)
        out = []
        arcs = self.arcs

        for lab, arc in arcs.items():
            if arc.kind == "pending":
                if arc.endpoints[0] != arc.endpoints[1]:
                    out.append(f"pending arc {lab!r} has distinct endpoints")
                if arc.orbifold_point is None or arc.orbifold_point not in self.orbifold_points:
                    out.append(f"pending arc {lab!r} lacks a declared orbifold point")
                elif arc.order != self.orbifold_points[arc.orbifold_point]:
                    out.append(f"pending arc {lab!r} order disagrees with its orbifold point")
                if NOTCHED in arc.tags:
                    out.append(f"pending arc {lab!r} may not be notched")
            if arc.kind == "boundary" and NOTCHED in arc.tags:
                out.append(f"boundary segment {lab!r} may not be notched")
            for e, t in zip(arc.endpoints, arc.tags):
                if t == NOTCHED and e not in self.punctures:
                    out.append(f"arc {lab!r}: notched end at non-puncture {e!r}")

        for p, order in self.orbifold_points.items():
            if not isinstance(order, int) or order < 3:
                out.append(f"orbifold point {p!r}: order must be an integer >= 3")
        enclosing_pending = [a for a in arcs.values() if a.kind == "pending"]
        seen_pts = [a.orbifold_point for a in enclosing_pending]
        if len(set(seen_pts)) != len(seen_pts):
            out.append("two pending arcs enclose the same orbifold point")
        if set(self.orbifold_points) - set(seen_pts):
            missing = set(self.orbifold_points) - set(seen_pts)
            out.append(f"orbifold points without a pending arc: {sorted(map(repr, missing))}")

        # triangle structure
        for ti, tri in enumerate(self.triangles):
            for lab, _ in tri.sides:
                if lab not in arcs:
                    out.append(f"triangle {ti}: unknown side {lab!r}")
            if any(lab not in arcs for lab, _ in tri.sides):
                continue
            if tri.kind == "ordinary":
                labs = tri.labels
                if len(set(labs)) != len(labs):
                    out.append(f"triangle {ti}: repeated side outside self-folded kind")
            elif tri.kind == "pending":
                if arcs[tri.sides[0][0]].kind != "pending":
                    out.append(f"triangle {ti}: monogon side is not a pending arc")
            elif tri.kind == "self_folded":
                try:
                    loop, radius = tri.loop, tri.radius
                except ValueError as e:
                    out.append(f"triangle {ti}: {e}")
                    continue
                p = tri.puncture
                if p not in self.punctures:
                    out.append(f"triangle {ti}: self-folded puncture {p!r} not declared")
                    continue
                la, ra = arcs[loop], arcs[radius]
                if set(la.endpoints) != set(ra.endpoints):
                    out.append(f"triangle {ti}: loop and radius endpoints differ")
                    continue
                if p not in ra.endpoints:
                    out.append(f"triangle {ti}: radius does not end at the puncture")
                    continue
                if ra.tag_at(p) != PLAIN or la.tag_at(p) != NOTCHED:
                    out.append(f"triangle {ti}: pair must be plain radius + notched loop")
                base = [e for e in ra.endpoints if e != p]
                if base and la.tag_at(base[0]) != ra.tag_at(base[0]):
                    out.append(f"triangle {ti}: pair tags disagree at the base point")
                if ra.kind != "standard" or la.kind != "standard":
                    out.append(f"triangle {ti}: pair members must be standard arcs")
            # counterclockwise corner chain
            sides = tri.sides
            for i in range(len(sides)):
                try:
                    h = self.side_head(sides[i])
                    t = self.side_tail(sides[(i + 1) % len(sides)])
                except KeyError:
                    continue
                if h != t:
                    out.append(f"triangle {ti}: corners do not chain at side {i}")

        # slot counts
        for lab, arc in arcs.items():
            slots = self._adj.get(lab, [])
            want = 1 if arc.kind == "boundary" else 2
            if len(slots) != want:
                out.append(f"arc {lab!r}: {len(slots)} triangle slots, expected {want}")
            if arc.kind == "pending":
                kinds = sorted(self.triangles[ti].kind for ti, _ in slots)
                if kinds != ["ordinary", "pending"]:
                    out.append(f"pending arc {lab!r}: needs one monogon and one ordinary slot")
        for lab, ti in self._radius_sf.items():
            slots = self._adj.get(lab, [])
            if any(t != ti for t, _ in slots):
                out.append(f"radius {lab!r} glued outside its self-folded triangle")

        # puncture tag states
        for p in self.punctures:
            if self.puncture_tag_state(p) == "mixed":
                out.append(f"puncture {p!r}: inconsistent mix of plain and notched ends")
        for p in self.punctures:
            for arc in arcs.values():
                if arc.kind == "boundary" and p in arc.endpoints:
                    out.append(f"puncture {p!r} lies on boundary segment {arc.label!r}")

        object.__setattr__(self, "_diag", tuple(out))
        return out

    def require_valid(self):
        diag = self.validate()
        if diag:
            raise TriangulationError(diag)
        return self

    # ------------------------------------------------------------------
    # seeds and matrices

    def var_table(self):
        pending = {lab: a.order for lab, a in self.arcs.items() if a.kind == "pending"}
        companions = {}
        for tri in self.triangles:
            if tri.kind == "self_folded":
                companions[tri.radius] = tri.loop
        return VarTable(self.arcs.keys(), boundary=self.boundary_labels(),
                        pending=pending, companions=companions)

    def _expand_side(self, label):
        """Loop sides of self-folded triangles count for the radius as well."""
        if label in self._loop_sf:
            return (label, self.triangles[self._loop_sf[label]].radius)
        return (label,)

    def exchange_matrix(self):
        """Signed adjacency matrix over interior arcs, declaration order."""
        labels = self.interior_labels()
        idx = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        B = np.zeros((n, n), dtype=int)
        for tri in self.triangles:
            if tri.kind != "ordinary":
                continue
            labs = tri.labels
            for t in range(3):
                u, v = labs[t], labs[(t + 1) % 3]
                for ui in self._expand_side(u):
                    for vi in self._expand_side(v):
                        if ui in idx and vi in idx:
                            B[idx[vi], idx[ui]] += 1
                            B[idx[ui], idx[vi]] -= 1
        return B

    def skew_symmetrizer(self):
        return np.diag(self.degree_vector())

    def boundary_exchange_rows(self):
        """Frozen rows: boundary segments counted against interior columns.

        Same counting as exchange_matrix, restricted to mixed pairs, so a
        flipped arc picks up the boundary segments of its quadrilateral."""
        cols = {lab: i for i, lab in enumerate(self.interior_labels())}
        rows = {lab: i for i, lab in enumerate(self.boundary_labels())}
        R = np.zeros((len(rows), len(cols)), dtype=int)
        for tri in self.triangles:
            if tri.kind != "ordinary":
                continue
            labs = tri.labels
            for t in range(3):
                u, v = labs[t], labs[(t + 1) % 3]
                for ui in self._expand_side(u):
                    for vi in self._expand_side(v):
                        if vi in rows and ui in cols:
                            R[rows[vi], cols[ui]] += 1
                        if ui in rows and vi in cols:
                            R[rows[ui], cols[vi]] -= 1
        return R

    def extended_exchange_matrix(self):
        """Exchange block, frozen boundary rows, then principal identity."""
        B = self.exchange_matrix()
        return np.vstack([B, self.boundary_exchange_rows(),
                          np.eye(B.shape[0], dtype=int)])

    def elementary_lamination_shear(self, label):
        """Shear coordinates of the elementary lamination of one arc.

        The lamination runs beside its arc with each plain end displaced to
        the clockwise flank of the endpoint (notched ends counterclockwise,
        which a tag-change sends back to the plain picture).  It then crosses
        its own quadrilateral once in the sign-positive zigzag and merely
        clips a corner of every other face, so the coordinate vector is the
        standard basis vector of the arc.  Kept as a method, not a constant,
        because it anchors the sign conventions used by the mutation rule.
        """
        arc = self.arcs.get(label)
        if arc is None:
            raise ValueError(f"unknown arc {label!r}")
        if not arc.is_interior:
            raise ValueError(f"boundary segment {label!r} carries no lamination")
        labels = self.interior_labels()
        vec = np.zeros(len(labels), dtype=int)
        vec[labels.index(label)] = 1
        return vec

    # ------------------------------------------------------------------
    # flips

    def flip(self, label):
        """Replace one tagged arc by its unique flip; returns a new value."""
        self.require_valid()
        arc = self.arcs.get(label)
        if arc is None:
            raise FlipError(f"unknown arc {label!r}")
        if not arc.is_interior:
            raise FlipError(f"boundary segment {label!r} cannot be flipped")
        if arc.kind == "pending":
            return self._flip_pending(label)
        if label in self._radius_sf:
            return self._flip_radius(label)
        return self._flip_quad(label)

    def _replace(self, new_arc, drop, add):
        arcs = [new_arc if a.label == new_arc.label else a for a in self.arcs.values()]
        tris = [t for i, t in enumerate(self.triangles) if i not in drop]
        tris.extend(add)
        return Triangulation(arcs, tris, self.punctures, self.orbifold_points).require_valid()

    def _flip_pending(self, label):
        arc = self.arcs[label]
        slots = self._adj[label]
        encl_i = next(ti for ti, _ in slots if self.triangles[ti].kind == "ordinary")
        mono_i = next(ti for ti, _ in slots if self.triangles[ti].kind == "pending")
        sides = self.triangles[encl_i].sides
        pos = next(i for i, (lab, _) in enumerate(sides) if lab == label)
        rot = sides[(pos - 1) % 3:] + sides[:(pos - 1) % 3]
        alpha, _, beta = rot
        new_base = self.side_head(beta)
        if new_base in self.punctures and self._forced_tag(new_base, label) != PLAIN:
            # pending ends are always plain, so the flipped arc cannot be
            # based at a puncture whose other ends are notched
            raise FlipError(f"pending arc {label!r}: flip lands on a notched puncture")
        new_arc = arc.replaced(endpoints=(new_base, new_base))
        encl = Triangle.ordinary(beta, (label, 1), alpha)
        mono = Triangle.monogon(label)
        return self._replace(new_arc, {encl_i, mono_i}, [encl, mono])

    def _flip_radius(self, label):
        p = self.triangles[self._radius_sf[label]].puncture
        flipped = self._toggle_puncture(p)._flip_quad(label)
        return flipped._toggle_puncture(p)

    def _toggle_puncture(self, point):
        """Tag-change transformation: toggle every tag at one puncture."""
        arcs = []
        for a in self.arcs.values():
            tags = tuple(_toggle(t) if e == point else t
                         for e, t in zip(a.endpoints, a.tags))
            arcs.append(a.replaced(tags=tags) if tags != a.tags else a)
        relabel = {}
        for tri in self.triangles:
            if tri.kind == "self_folded" and tri.puncture == point:
                relabel[tri.loop] = tri.radius
                relabel[tri.radius] = tri.loop
        tris = []
        for tri in self.triangles:
            if not (set(tri.labels) & set(relabel)):
                tris.append(tri)
                continue
            if tri.kind == "self_folded" and tri.puncture == point:
                new_loop, new_radius = tri.radius, tri.loop
                arc_map = {a.label: a for a in arcs}
                fwd = 1 if arc_map[new_radius].endpoints[1] == point else -1
                tris.append(Triangle.self_folded(new_loop, new_radius, point,
                                                 radius_forward=fwd))
            else:
                tris.append(Triangle(tri.kind,
                                     tuple((relabel.get(lab, lab), d) for lab, d in tri.sides),
                                     puncture=tri.puncture))
        return Triangulation(arcs, tris, self.punctures, self.orbifold_points).require_valid()

    def _flip_quad(self, label):
        slots = self._adj[label]
        if len(slots) != 2 or slots[0][0] == slots[1][0]:
            raise FlipError(f"arc {label!r}: unsupported self-glued configuration")
        t1, t2 = (self.triangles[ti] for ti, _ in slots)
        r1 = _rotate_to_last(t1.sides, label)
        r2 = _rotate_to_last(t2.sides, label)
        (A1, A2), (C1, C2) = r1[:2], r2[:2]
        V2, V4 = self.side_head(A1), self.side_head(C1)
        sf1 = A1[0] == C2[0]
        sf2 = A2[0] == C1[0]
        if sf1 and sf2:
            raise FlipError(f"arc {label!r}: flip closes up on both sides")
        if sf1:
            new_arc, tris = self._sf_creation(label, A1[0], self.side_tail(A1),
                                              other=(A2, C1))
        elif sf2:
            new_arc, tris = self._sf_creation(label, A2[0], self.side_head(A2),
                                              other=(A1, C2), mirrored=True)
        else:
            tags = (self._forced_tag(V2, label), self._forced_tag(V4, label))
            new_arc = Arc(label, "standard", (V2, V4), tags)
            tris = [Triangle.ordinary(A1, (label, 1), C2),
                    Triangle.ordinary(A2, C1, (label, -1))]
        return self._replace(new_arc, {slots[0][0], slots[1][0]}, tris)

    def _sf_creation(self, label, radius_label, puncture, other, mirrored=False):
        """New diagonal closes into a loop: build the self-folded pair."""
        rad = self.arcs[radius_label]
        pslot = rad.endpoints.index(puncture)
        tags = tuple(_toggle(t) if i == pslot else t for i, t in enumerate(rad.tags))
        new_arc = Arc(label, "standard", rad.endpoints, tags)
        if tags[pslot] == NOTCHED:
            loop_lab, rad_lab, rad_arc = label, radius_label, rad
        else:
            if rad.tag_at(puncture) != NOTCHED:
                raise FlipError(f"arc {label!r}: flip produces an untaggable loop")
            loop_lab, rad_lab, rad_arc = radius_label, label, new_arc
        fwd = 1 if rad_arc.endpoints[1] == puncture else -1
        sf = Triangle.self_folded(loop_lab, rad_lab, puncture, radius_forward=fwd)
        s1, s2 = other
        if mirrored:
            encl = Triangle.ordinary(s1, (loop_lab, -1), s2)
        else:
            encl = Triangle.ordinary(s1, s2, (loop_lab, -1))
        return new_arc, [sf, encl]

    def _forced_tag(self, point, exclude):
        if point not in self.punctures:
            return PLAIN
        tags = set()
        for a in self.arcs.values():
            if a.label == exclude:
                continue
            for e, t in zip(a.endpoints, a.tags):
                if e == point:
                    tags.add(t)
        if tags == {NOTCHED}:
            return NOTCHED
        if NOTCHED in tags:
            raise FlipError(f"flip lands on puncture {point!r} in a paired state")
        return PLAIN

    # ------------------------------------------------------------------

    def _key(self):
        # an arc traversed the other way is the same arc: normalize the
        # endpoint order (and flip side directions to match) before comparing
        reverse = set()
        arcs_norm = []
        for a in self.arcs.values():
            u, v = a.endpoints
            if u != v and repr(v) < repr(u):
                reverse.add(a.label)
                arcs_norm.append(a.replaced(endpoints=(v, u),
                                            tags=(a.tags[1], a.tags[0])))
            else:
                arcs_norm.append(a)
        tris = []
        for t in self.triangles:
            sides = tuple((lab, -d if lab in reverse else d) for lab, d in t.sides)
            tris.append(Triangle(t.kind, sides, puncture=t.puncture).canonical())
        return (tuple(arcs_norm), tuple(sorted(tris, key=repr)), self.punctures,
                tuple(sorted(self.orbifold_points.items(), key=repr)))

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Triangulation({len(self.interior_labels())} arcs, "
                f"{len(self.triangles)} faces, "
                f"{len(self.punctures)} punctures, "
                f"{len(self.orbifold_points)} orbifold points)")


def _rotate_to_last(sides, label):
    """Rotate a ccw side tuple so the unique side with `label` comes last."""
    hits = [i for i, (lab, _) in enumerate(sides) if lab == label]
    if len(hits) != 1:
        raise FlipError(f"side {label!r} is not unique in this face")
    i = hits[0]
    return sides[i + 1:] + sides[:i + 1]
