"""Building boundary configurations from branch data and reducing them.

The builder simulates the minimal blowup process over the line at
infinity: each branch is a token sitting at a centre of the current
surface, carrying its remaining pair queue and its local contact numbers
with the curves through the centre.  A blowup advances every token at the
centre at once; tokens stop when they cross one curve transversally at a
point of their own.  Weights, adjacency, multiplicities and sprouting
counts all fall out of the simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import hn
from .barks import Chain, DivisorQ, bark_divisor, capacity, maximal_twigs
from .hn import BoundaryConventionError, BranchPair, HNPair
from .trees import Tag, WeightedTree, build_tree, kk_plus_t, nc_minimalize


class NoAsymptoteViolation(ValueError):
    """An inequality that holds under the no-asymptote assumption failed."""


# -- ambient bookkeeping -----------------------------------------------------


def ambient_k_sq(tree: WeightedTree) -> int:
    """K^2 of the ambient surface, pinned by the non-E component count."""
    return 10 - len(tree.d_ids())


def epsilon_of(tree: WeightedTree) -> int:
    """2 - (K+D+E)^2 computed from the configuration."""
    k_sq = ambient_k_sq(tree)
    k_dot = sum(-2 - w for _, w in tree.vertices)
    square = sum(w for _, w in tree.vertices) + 2 * len(tree.edges)
    return 2 - (k_sq + 2 * k_dot + square)


def gamma_of(tree: WeightedTree) -> int:
    e = tree.e_id
    if e is None:
        raise ValueError("no E component")
    return -tree.weight(e)


# -- scenes -------------------------------------------------------------------


@dataclass(frozen=True)
class Scene:
    """A resolution state: the configuration plus its counters."""

    tree: WeightedTree
    gamma: int
    epsilon: int
    h_phi: int
    h_psi: int = 0
    r: int = 0
    r_tilde: int = 0
    no_asymptote: bool = False
    standard_start: bool = True
    e_touched: bool = False
    branch_mu: tuple[tuple[int, ...], ...] = ()
    unused_pairs: tuple[int, ...] = (0, 0)


def make_scene(
    tree: WeightedTree,
    h_phi: int,
    *,
    h_psi: int = 0,
    r: int = 0,
    r_tilde: int = 0,
    no_asymptote: bool = False,
    standard_start: bool = True,
    e_touched: bool = False,
    branch_mu: tuple[tuple[int, ...], ...] = (),
    unused_pairs: tuple[int, ...] = (0, 0),
) -> Scene:
    e = tree.e_id
    if e is None:
        raise ValueError("a scene needs an E component")
    if tree.degree(e) != 2:
        raise ValueError("E must meet the rest of the boundary exactly twice")
    if not tree.is_connected(tree.ids):
        raise ValueError("scene configuration must be connected")
    if len(tree.d_ids()) > 1 and not tree.is_connected(tree.d_ids()):
        raise ValueError("the non-E part must be connected")
    gamma = gamma_of(tree)
    eps = epsilon_of(tree)
    if standard_start and h_phi != 2 + eps + gamma + h_psi:
        raise AssertionError(
            f"bookkeeping identity failed: h_phi={h_phi} vs 2+eps+gamma+h_psi="
            f"{2 + eps + gamma + h_psi}"
        )
    return Scene(
        tree=tree,
        gamma=gamma,
        epsilon=eps,
        h_phi=h_phi,
        h_psi=h_psi,
        r=r,
        r_tilde=r_tilde,
        no_asymptote=no_asymptote,
        standard_start=standard_start,
        e_touched=e_touched,
        branch_mu=branch_mu,
        unused_pairs=unused_pairs,
    )


# -- the blowup simulator -----------------------------------------------------


@dataclass
class Token:
    """A branch germ travelling through the blowup process.

    ``contacts`` maps curve ids to positive local intersection numbers;
    the centre is the crossing of the (two) curves, or a free point of the
    single curve identified by ``marker``.  ``pairs`` is the remaining
    queue; a token at a corner needs no queue until it lands free.
    """

    name: str
    contacts: dict[int, int]
    marker: Optional[int]  # None while at a corner
    pairs: list[HNPair] = field(default_factory=list)
    mu: list[int] = field(default_factory=list)
    done: bool = False
    host: Optional[int] = None
    unused: int = 0

    def site(self) -> tuple:
        curves = tuple(sorted(self.contacts))
        if len(curves) == 2:
            return ("corner",) + curves
        return ("free", curves[0], self.marker)

    def at_free(self) -> bool:
        return len(self.contacts) == 1

    def free_contact(self) -> int:
        (c,) = self.contacts.values()
        return c


class Simulator:
    """Blowup engine over an explicit seed configuration.

    ``weights``/``edges`` seed the configuration (no E yet); tokens are
    placed on it.  After :meth:`run`, the final configuration, the total
    sum of squared centre multiplicities, the sprouting count and each
    token's multiplicity record are available.
    """

    def __init__(
        self,
        weights: dict[int, int],
        edges: Sequence[tuple[int, int]],
        tokens: Sequence[Token],
        common_pairs: int = 0,
    ):
        self.weights = dict(weights)
        self.edges = [tuple(sorted(e)) for e in edges]
        self.tokens = list(tokens)
        self.s = common_pairs
        self.pairs_done = 0
        self.sprouting = 0
        self.subdivisional = 0
        self.m_sq = 0
        self._next = max(self.weights, default=-1) + 1
        self._marker = max((t.marker for t in self.tokens if t.marker is not None), default=-1) + 1
        for t in self.tokens:
            for c in t.contacts:
                if c not in self.weights:
                    raise ValueError(f"token {t.name} sits on unknown curve {c}")
            if any(v <= 0 for v in t.contacts.values()):
                raise ValueError(f"token {t.name} has a non-positive contact")
            if len(t.contacts) == 2:
                pair = tuple(sorted(t.contacts))
                if pair not in self.edges:
                    raise ValueError(f"token {t.name} sits on a missing crossing {pair}")

    def _fresh_marker(self) -> int:
        self._marker += 1
        return self._marker - 1

    def _retire_finished(self) -> None:
        active = [t for t in self.tokens if not t.done]
        for t in active:
            if not t.at_free() or t.free_contact() != 1:
                continue
            shared = any(
                o is not t and not o.done and o.site() == t.site() for o in active
            )
            if shared:
                continue
            t.done = True
            t.host = next(iter(t.contacts))
            t.unused = len(t.pairs)

    def _mult_of(self, token: Token) -> int:
        if len(token.contacts) == 2:
            return min(token.contacts.values())
        contact = token.free_contact()
        if not token.pairs:
            raise BoundaryConventionError(
                f"token {token.name} needs a pair to keep separating but its "
                f"sequence is exhausted"
            )
        pair = token.pairs.pop(0)
        if pair.c != contact:
            raise ValueError(
                f"token {token.name}: pair contact {pair.c} does not match the "
                f"running contact {contact}"
            )
        return pair.p

    def _blow(self, group: list[Token]) -> None:
        site = group[0].site()
        curves = tuple(sorted(set().union(*(t.contacts for t in group))))
        nid = self._next
        self._next += 1
        for c in curves:
            self.weights[c] -= 1
        self.weights[nid] = -1
        if len(curves) == 2:
            self.edges.remove((curves[0], curves[1]))
            self.edges.append(tuple(sorted((curves[0], nid))))
            self.edges.append(tuple(sorted((curves[1], nid))))
            self.subdivisional += 1
        else:
            self.edges.append(tuple(sorted((curves[0], nid))))
            self.sprouting += 1

        was_together = len(group) == 2
        m_total = 0
        landed: list[Token] = []
        for t in group:
            mult = self._mult_of(t)
            m_total += mult
            t.mu.append(mult)
            new = {c: v - mult for c, v in t.contacts.items() if v - mult > 0}
            new[nid] = mult
            t.contacts = new
            if len(new) == 1:
                landed.append(t)
                t.marker = None  # assigned below
            else:
                t.marker = None
        self.m_sq += m_total * m_total

        if was_together and len(landed) == 2:
            self.pairs_done += 1
            if self.pairs_done <= self.s:
                shared = self._fresh_marker()
                for t in landed:
                    t.marker = shared
            else:
                for t in landed:
                    t.marker = self._fresh_marker()
        else:
            for t in landed:
                t.marker = self._fresh_marker()
            if was_together and len(landed) == 1 and self.pairs_done < self.s:
                raise ValueError(
                    "branches separate before the declared number of common pairs"
                )
        if was_together and len(landed) == 0:
            a, b = group
            if a.site() != b.site() and self.pairs_done < self.s:
                raise ValueError(
                    "branches separate before the declared number of common pairs"
                )

    def run(self, max_steps: int = 100000) -> None:
        for _ in range(max_steps):
            self._retire_finished()
            active = [t for t in self.tokens if not t.done]
            if not active:
                return
            groups: dict[tuple, list[Token]] = {}
            for t in active:
                groups.setdefault(t.site(), []).append(t)
            order = sorted(groups.values(), key=lambda g: min(self.tokens.index(t) for t in g))
            self._blow(order[0])
        raise RuntimeError("blowup simulation did not terminate")

    def tree(self, tags: Optional[dict[int, Tag]] = None) -> WeightedTree:
        return build_tree(self.weights, self.edges, tags)


# -- building from branch data ------------------------------------------------


def _repeat_count(seq: hn.HNSequence) -> int:
    from_two, from_one = hn.leading_repeats(seq)
    if seq.is_tangent():
        return from_two
    return max(from_one - 1, 0)


def build_resolution(bp: BranchPair, *, no_asymptote: bool = False) -> Scene:
    """Simulate the minimal blowup sequence for two branches at infinity.

    Returns the resulting configuration with E attached (self-intersection
    d^2 minus the sum of squared centre multiplicities) together with all
    counters.  The one underdetermined situation, common pairs exhausting
    a whole sequence, raises :class:`BoundaryConventionError`.
    """
    if bp.separation_is_boundary():
        raise BoundaryConventionError(
            "common pairs exhaust one branch; the separation geometry is "
            "not determined by the pair data"
        )
    line = 0
    t0 = Token("first", {line: bp.first.c1}, marker=0, pairs=list(bp.first.pairs))
    marker1 = 0 if bp.same_point else 1
    t1 = Token("second", {line: bp.second.c1}, marker=marker1, pairs=list(bp.second.pairs))
    sim = Simulator({line: 1}, [], [t0, t1], common_pairs=bp.s if bp.same_point else 0)
    sim.run()

    e_id = sim._next
    d = bp.d
    e_sq = d * d - sim.m_sq
    weights = dict(sim.weights)
    weights[e_id] = e_sq
    edges = list(sim.edges)
    for t in (t0, t1):
        assert t.host is not None
        edges.append((t.host, e_id))
    tree = build_tree(weights, edges, {line: Tag.LINE_AT_INFINITY, e_id: Tag.E})

    for tok, seq in ((t0, bp.first), (t1, bp.second)):
        expected = hn.multiplicity_sequence(seq)
        assert tuple(tok.mu) == expected[: len(tok.mu)], (
            f"simulated multiplicities {tok.mu} are not a prefix of {expected}"
        )
    unused = (t0.unused, t1.unused)
    if unused == (0, 0):
        assert e_sq == -hn.gamma_prime_b(bp), (
            "self-intersection bookkeeping disagrees with the closed form"
        )

    return make_scene(
        tree,
        sim.sprouting,
        r=_repeat_count(bp.first),
        r_tilde=_repeat_count(bp.second),
        no_asymptote=no_asymptote,
        branch_mu=(tuple(t0.mu), tuple(t1.mu)),
        unused_pairs=unused,
    )


# -- NC-minimalization of a scene ---------------------------------------------


def minimalize(scene: Scene) -> Scene:
    """Contract non-branching (-1)-components of the non-E part; record the
    sprouting count and whether E was touched."""
    res = nc_minimalize(scene.tree)
    out = make_scene(
        res.tree,
        scene.h_phi,
        h_psi=scene.h_psi + res.sprouting_contractions,
        r=scene.r,
        r_tilde=scene.r_tilde,
        no_asymptote=scene.no_asymptote,
        standard_start=scene.standard_start,
        e_touched=scene.e_touched or res.e_touched,
        branch_mu=scene.branch_mu,
        unused_pairs=scene.unused_pairs,
    )
    if not res.e_touched and out.gamma != scene.gamma:
        raise AssertionError("gamma changed although E was untouched")
    if out.no_asymptote:
        if out.gamma <= 0:
            raise NoAsymptoteViolation(f"gamma = {out.gamma} but must be positive")
        if out.epsilon > 3:
            raise NoAsymptoteViolation(f"epsilon = {out.epsilon} exceeds 3")
    return out


# -- 2-reduction ---------------------------------------------------------------


@dataclass(frozen=True)
class ReducedScene:
    """State after contracting (-1)-components meeting E once.

    The image of E is smooth but meets the remaining components with
    multiplicities, so the non-E part is kept as a tree and E's contacts
    as a separate count.
    """

    t_tree: WeightedTree
    e0_sq: int
    e0_contacts: tuple[tuple[int, int], ...]
    t: int
    gamma: int
    epsilon: int
    no_asymptote: bool
    identity_lhs: int
    identity_rhs: int

    @property
    def gamma0(self) -> int:
        return -self.e0_sq

    def e0_dot_t(self) -> int:
        return sum(m for _, m in self.e0_contacts)


def two_reduction(scene: Scene) -> tuple[ReducedScene, int]:
    """Contract (-1)-components meeting E once until every remaining
    (-1)-component meets the image of E at least twice or branches.

    Returns the reduced state and the number of sprouting contractions t.
    The two-sided bookkeeping identity (E0+2K).(K+T) = 8-2eps-gamma+t is
    recomputed from the final state; a mismatch is a hard error.
    """
    tree = scene.tree
    e = tree.e_id
    weights = {v: tree.weight(v) for v in tree.d_ids()}
    edges = [ed for ed in tree.edges if e not in ed]
    contacts: dict[int, int] = {}
    for a, b in tree.edges:
        if e in (a, b):
            other = b if a == e else a
            contacts[other] = contacts.get(other, 0) + 1
    e0_sq = -scene.gamma
    t_count = 0

    def adj(v: int) -> list[int]:
        out = []
        for a, b in edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    while True:
        eligible = [
            v
            for v in sorted(weights)
            if weights[v] == -1 and contacts.get(v, 0) == 1 and len(adj(v)) <= 2
        ]
        if not eligible:
            break
        v = eligible[0]
        ns = adj(v)
        if len(ns) == 0:
            raise RuntimeError("refusing to contract the last component")
        if len(ns) == 1:
            t_count += 1
        edges = [ed for ed in edges if v not in ed]
        if len(ns) == 2:
            edges.append(tuple(sorted(ns)))
        for u in ns:
            weights[u] += 1
            contacts[u] = contacts.get(u, 0) + 1
        del weights[v]
        del contacts[v]
        e0_sq += 1

    for v, w in weights.items():
        if w == -1 and len(adj(v)) <= 2 and contacts.get(v, 0) < 2:
            raise RuntimeError(
                f"component {v} violates the reduction condition but cannot "
                f"be contracted"
            )

    t_tree = build_tree(weights, edges)
    e0_dot_t = sum(contacts.values())
    k_sq = 10 - len(weights)
    k_dot_t = sum(-2 - w for w in weights.values())
    lhs = (-2 - e0_sq) + e0_dot_t + 2 * (k_sq + k_dot_t)
    rhs = 8 - 2 * scene.epsilon - scene.gamma + t_count
    if lhs != rhs:
        raise RuntimeError(
            f"(E0+2K).(K+T) mismatch: recomputed {lhs}, counter says {rhs}"
        )
    reduced = ReducedScene(
        t_tree=t_tree,
        e0_sq=e0_sq,
        e0_contacts=tuple(sorted(contacts.items())),
        t=t_count,
        gamma=scene.gamma,
        epsilon=scene.epsilon,
        no_asymptote=scene.no_asymptote,
        identity_lhs=lhs,
        identity_rhs=rhs,
    )
    return reduced, t_count


@dataclass(frozen=True)
class BasicBoundReport:
    slack: int  # 7 + t - 2 eps - gamma
    t: int
    gamma: int
    epsilon: int
    holds: bool


def check_basic_inequality(reduced: ReducedScene) -> BasicBoundReport:
    """Evaluate 7 + t - 2 eps - gamma; non-negative when no good asymptote
    exists (the reduced pairing (E0+2K).(K+T) is then positive)."""
    slack = 7 + reduced.t - 2 * reduced.epsilon - reduced.gamma
    report = BasicBoundReport(
        slack=slack,
        t=reduced.t,
        gamma=reduced.gamma,
        epsilon=reduced.epsilon,
        holds=slack >= 0,
    )
    if reduced.no_asymptote and not report.holds:
        raise NoAsymptoteViolation(
            f"7 + t - 2 eps - gamma = {slack} is negative"
        )
    return report


# -- twig capacity sum ----------------------------------------------------------


@dataclass(frozen=True)
class SumEReport:
    total: Fraction
    per_twig: tuple[tuple[tuple[int, ...], Fraction], ...]
    bark_self_intersection: Fraction
    bound: int  # 1 + epsilon
    holds: bool


def sum_ei(scene: Scene) -> SumEReport:
    """Sum of twig capacities of the configuration; equals minus the bark
    self-intersection, and is at most 1 + epsilon for no-asymptote scenes."""
    twigs = maximal_twigs(scene.tree)
    per = tuple((twig.ids, capacity(scene.tree, twig)) for twig in twigs)
    total = sum((c for _, c in per), Fraction(0))
    bark = bark_divisor(scene.tree)
    bark_sq = bark.self_intersection(scene.tree)
    assert -bark_sq == total, "bark self-intersection disagrees with capacities"
    bound = 1 + scene.epsilon
    holds = total <= bound
    if scene.no_asymptote and not holds:
        raise NoAsymptoteViolation(f"sum of capacities {total} exceeds {bound}")
    return SumEReport(
        total=total,
        per_twig=per,
        bark_self_intersection=bark_sq,
        bound=bound,
        holds=holds,
    )


# -- elementary transformations --------------------------------------------------


@dataclass(frozen=True)
class ElementaryTransformResult:
    scene: Scene
    case: int  # 1, 2 or 3
    old_components: int
    new_components: int


def elementary_transformation(scene: Scene, l: int, a_vertex: int) -> ElementaryTransformResult:
    """Rewrite the configuration under the elementary transformation of the
    plane attached to the initial chain of the resolution.

    The configuration must exhibit the chain produced by a first pair of
    shape ((l+1)c, lc): the line at infinity as a (-1)-tip followed by l-1
    components of weight -2, then the last exceptional curve C carrying
    both the tail M (a tip of weight -(l+1)) and the branch towers, whose
    first exceptional curve is ``a_vertex``.  Three outcomes, detected
    from C's weight: tower centres off C with l = 1 (case 1), off C with
    l > 1 (case 2), or a centre on C (case 3).  The result always has
    strictly fewer non-E components.
    """
    if l < 1:
        raise ValueError("l must be positive")
    tree = scene.tree
    linf = next((v for v, t in tree.tags if t == Tag.LINE_AT_INFINITY.value), None)
    if linf is None:
        raise ValueError("no line-at-infinity component")
    if tree.weight(linf) != -1 or tree.degree(linf) != 1:
        raise ValueError("the line at infinity is not a (-1)-tip")

    chain = [linf]
    cur, prev = tree.neighbors(linf)[0], linf
    for _ in range(l - 1):
        if tree.weight(cur) != -2 or tree.degree(cur) != 2:
            raise ValueError("initial chain does not match the expected shape")
        chain.append(cur)
        a, b = tree.neighbors(cur)
        cur, prev = (b if a == prev else a), cur
    c_vertex = cur
    e = tree.e_id
    if c_vertex == e or tree.weight(c_vertex) > -2 or tree.degree(c_vertex) != 3:
        raise ValueError("no valid middle component after the initial chain")
    others = list(tree.neighbors(c_vertex))
    others.remove(chain[-1])
    m_candidates = [
        v for v in others if tree.degree(v) == 1 and tree.weight(v) == -(l + 1) and v != e
    ]
    if len(m_candidates) != 1:
        raise ValueError("cannot identify the tail component")
    m_vertex = m_candidates[0]
    others.remove(m_vertex)
    root = others[0]

    comp = next(
        c
        for c in tree.connected_components(set(tree.ids) - {c_vertex})
        if root in c
    )
    if a_vertex not in comp:
        raise ValueError("a_vertex is not in the branch tower")
    if e not in comp:
        raise ValueError("E must sit inside the branch tower")

    case = 3 if tree.weight(c_vertex) <= -3 else (1 if l == 1 else 2)
    if case in (1, 2) and a_vertex != root:
        raise ValueError("with centres off the middle component, a_vertex must attach to it")

    fresh = max(tree.ids) + 1
    b_ids = list(range(fresh, fresh + l - 1))
    b_vertices = [(b, -2) for b in b_ids[:-1]] + ([(b_ids[-1], -1)] if b_ids else [])
    b_edges = list(zip([a_vertex] + b_ids[:-1], b_ids))

    if case == 1:
        out = tree.replaced(
            drop_vertices=chain + [c_vertex, m_vertex],
            weight_deltas={a_vertex: 2},
            add_tags=[(a_vertex, Tag.LINE_AT_INFINITY)],
        )
    elif case == 2:
        out = tree.replaced(
            drop_vertices=chain + [c_vertex],
            add_vertices=b_vertices,
            add_edges=b_edges + [(a_vertex, m_vertex)],
            weight_deltas={m_vertex: 1},
            add_tags=[(b_ids[-1], Tag.LINE_AT_INFINITY)],
        )
    else:
        deltas = {c_vertex: 1}
        tags = []
        if b_ids:
            deltas[a_vertex] = -1
            tags.append((b_ids[-1], Tag.LINE_AT_INFINITY))
        else:
            tags.append((a_vertex, Tag.LINE_AT_INFINITY))
        out = tree.replaced(
            drop_vertices=chain,
            add_vertices=b_vertices,
            add_edges=b_edges,
            weight_deltas=deltas,
            add_tags=tags,
        )

    h_phi = 6 - kk_plus_t(out, out.d_ids())
    new_scene = make_scene(
        out,
        h_phi,
        no_asymptote=scene.no_asymptote,
        standard_start=scene.standard_start,
    )
    old_n, new_n = len(tree.d_ids()), len(out.d_ids())
    if new_n >= old_n:
        raise AssertionError("transformation did not decrease the component count")
    return ElementaryTransformResult(new_scene, case, old_n, new_n)
