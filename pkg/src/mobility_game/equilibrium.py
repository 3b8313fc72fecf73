"""Best-response dynamics, Nash certification, social optimum and price of anarchy."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .mechanics import (
    Action,
    Assignment,
    Game,
    initial_payment,
    potential,
    price_power,
    welfare,
)
from .network import StructuralError, vehicle_count
from .prospect import ProspectModel, lottery_weights, prospect_potential, prospect_welfare
from .search import golden_section_max, grid_max, payment_grid, zoom_grid_max

log = logging.getLogger(__name__)

BEHAVIORS = ("rational", "prospect")
PAYMENT_SOLVERS = ("golden", "grid")


class NoEquilibriumError(RuntimeError):
    """No run of the dynamics reached an equilibrium."""


@dataclass(frozen=True)
class BestResponseConfig:
    """Knobs of the best-response search.

    Ties between discrete options go to the lexicographically smallest
    (route, hub, type); ties between payments go to the smallest payment.
    """

    payment_solver: str = "golden"
    payment_tolerance: float = 1e-6
    grid_points: int = 10_001
    max_rounds: int = 10_000
    improvement_epsilon: float = 1e-7
    tie_break: str = "lexicographic"

    def __post_init__(self):
        if self.payment_solver not in PAYMENT_SOLVERS:
            raise ValueError(f"payment_solver must be one of {PAYMENT_SOLVERS}")
        if not (self.payment_tolerance > 0 and self.improvement_epsilon > 0):
            raise ValueError("tolerances must be positive")
        if self.max_rounds < 1 or self.grid_points < 2:
            raise ValueError("max_rounds >= 1 and grid_points >= 2 required")
        if self.tie_break != "lexicographic":
            raise ValueError("only lexicographic tie-breaking is supported")


@dataclass
class EquilibriumReport:
    assignment: Assignment
    is_nash: bool
    welfare: float
    rounds_used: int
    potential_trace: list[float] = field(default_factory=list)
    gap: float = 0.0
    converged: bool = True
    heuristic: bool = False
    behavior: str = "rational"


@dataclass(frozen=True)
class NashCheck:
    is_nash: bool
    gap: float
    worst_traveler: int | None


def _resolve(behavior: str, prospect: ProspectModel | None):
    if behavior not in BEHAVIORS:
        raise ValueError(f"behavior must be one of {BEHAVIORS}")
    if behavior == "prospect" and prospect is None:
        raise ValueError("prospect behavior needs a ProspectModel")
    return prospect if behavior == "prospect" else None


class _Evaluator:
    """Fast utility bookkeeping for one traveler at a time.

    Everything a traveler's best response needs is rebuilt from the other
    travelers' actions, so there is no floating-point drift across steps.
    """

    def __init__(self, game: Game, prospect: ProspectModel | None, config: BestResponseConfig):
        net = game.network
        self.game = game
        self.config = config
        self.prospect = prospect
        self.options = net.discrete_options()
        if not self.options:
            raise StructuralError("empty action set")
        self.route_edges = {r.id: r.edges for r in net.routes}
        self.road_xi = {e.id: (e.xi1, e.xi2) for e in net.roads}
        self.type_wc = {h.id: (h.traffic_weight, h.max_capacity) for h in net.service_types}
        self.type_lo = {h.id: h.min_payment for h in net.service_types}
        self.budget = {v.id: (None if v.is_terminal else v.budget) for v in net.hubs}
        self.rate = {(v.id, h): r for v in net.hubs for h, r in v.service_rate.items()}
        cfg = game.config
        self.zeta1, self.zeta2, self.p = cfg.zeta1, cfg.zeta2, cfg.pricing_exponent
        self.by_type = cfg.waiting == "type"
        self.wallets = [(t.wallet, t.wallet_max, t.eta) for t in game.travelers]
        if prospect is not None:
            if self.p != 2.0:
                raise ValueError("prospect behavior is defined for the quadratic pricing mechanism only")
            params = prospect.params
            self.beta, self.lam = params.beta, params.lam
            self.lottery = {}
            for v, b in self.budget.items():
                if b is not None:
                    lot = prospect.lottery(v)
                    self.lottery[v] = (np.asarray(lot.nodes), lottery_weights(lot, params))
        self._gain_cache: dict = {}

    # payment part -------------------------------------------------------
    def bounds(self, i: int, h: int) -> tuple[float, float]:
        hi = self.wallets[i][1]
        return min(self.type_lo[h], hi), hi

    def pay_value(self, i: int, v: str, others: float, pay: float) -> float:
        """Pricing (or subjective pricing) minus disincentive, scalar."""
        theta, theta_max, eta = self.wallets[i]
        denom = theta + eta * pay
        g = theta_max / denom if denom > 0 else math.inf
        b = self.budget[v]
        if b is None:
            return -g
        if self.prospect is None:
            c = b - others
            if self.p == 2.0:
                tau = pay * (2.0 * c - pay)
            else:
                tau = price_power(c, self.p) - price_power(c - pay, self.p)
            return tau - g
        return -pay * (2.0 * others + pay) + self.gain(v, pay) - g

    def gain(self, v: str, pay):
        """Subjective expected gain from hub ``v``'s budget lottery; vectorized."""
        nodes, w = self.lottery[v]
        x = 2.0 * np.multiply.outer(pay, nodes)
        mag = np.abs(x) ** self.beta
        out = np.where(x >= 0, mag, -self.lam * mag) @ w
        return float(out) if np.ndim(out) == 0 else out

    def pay_value_vec(self, i: int, v: str, others: float, pays: np.ndarray,
                      cached: bool = False) -> np.ndarray:
        theta, theta_max, eta = self.wallets[i]
        denom = theta + eta * pays
        with np.errstate(divide="ignore"):
            g = np.where(denom > 0, theta_max / np.where(denom > 0, denom, 1.0), np.inf)
        b = self.budget[v]
        if b is None:
            return -g
        if self.prospect is None:
            c = b - others
            if self.p == 2.0:
                tau = pays * (2.0 * c - pays)
            else:
                tau = abs(c) ** self.p - np.abs(c - pays) ** self.p
            return tau - g
        gain = self._gain_curve(v, pays) if cached else self.gain(v, pays)
        return -pays * (2.0 * others + pays) + gain - g

    def _gain_curve(self, v: str, pays: np.ndarray) -> np.ndarray:
        # the subjective gain does not depend on other travelers, so cache it per grid
        key = (v, float(pays[0]), float(pays[-1]), len(pays))
        out = self._gain_cache.get(key)
        if out is None:
            nodes, w = self.lottery[v]
            x = 2.0 * np.multiply.outer(pays, nodes)
            mag = np.abs(x) ** self.beta
            out = np.where(x >= 0, mag, -self.lam * mag) @ w
            self._gain_cache[key] = out
        return out

    def best_payment(self, i: int, v: str, h: int, others: float) -> tuple[float, float]:
        lo, hi = self.bounds(i, h)
        cfg = self.config
        if cfg.payment_solver == "grid":
            return grid_max(lambda xs: self.pay_value_vec(i, v, others, xs, cached=True),
                            lo, hi, cfg.grid_points)
        if self.prospect is None and self.p == 2.0:
            # concave in the payment: plain golden section suffices
            return golden_section_max(lambda x: self.pay_value(i, v, others, x),
                                      lo, hi, cfg.payment_tolerance)
        return zoom_grid_max(lambda xs: self.pay_value_vec(i, v, others, xs),
                             lo, hi, cfg.payment_tolerance)

    # congestion part ----------------------------------------------------
    def _others_state(self, actions: Sequence[Action], i: int):
        n_eh: Counter = Counter()
        paid: dict[str, float] = {}
        queue: Counter = Counter()
        cohort: Counter = Counter()
        for k, a in enumerate(actions):
            if k == i:
                continue
            for e in self.route_edges[a.route]:
                n_eh[e, a.service_type] += 1
            paid[a.hub] = paid.get(a.hub, 0.0) + a.payment
            queue[a.hub, a.service_type] += 1
            cohort[a.hub] += 1
        load: dict[str, float] = dict.fromkeys(self.road_xi, 0.0)
        for (e, h), n in n_eh.items():
            w, cap = self.type_wc[h]
            load[e] += w * vehicle_count(n, cap)
        return n_eh, paid, queue, cohort, load

    def _discrete_cost(self, state, r: int, v: str, h: int) -> float:
        n_eh, _, queue, cohort, load = state
        w, cap = self.type_wc[h]
        cong = 0.0
        for e in self.route_edges[r]:
            n = n_eh.get((e, h), 0)
            j = load[e] + w * (vehicle_count(n + 1, cap) - vehicle_count(n, cap))
            xi1, xi2 = self.road_xi[e]
            cong += xi1 * j + xi2
        cost = self.zeta1 * cong
        if not self._is_terminal(v):
            q = queue.get((v, h), 0) if self.by_type else cohort.get(v, 0)
            cost += self.zeta2 * (q + 1) / self.rate[v, h]
        return cost

    def _is_terminal(self, v: str) -> bool:
        return self.budget[v] is None

    def current_value(self, actions: Sequence[Action], i: int, state=None) -> float:
        if state is None:
            state = self._others_state(actions, i)
        a = actions[i]
        others = state[1].get(a.hub, 0.0)
        return (self.pay_value(i, a.hub, others, a.payment)
                - self._discrete_cost(state, a.route, a.hub, a.service_type))

    def best_response(self, actions: Sequence[Action], i: int, state=None) -> tuple[Action, float]:
        if state is None:
            state = self._others_state(actions, i)
        paid = state[1]
        pay_cache: dict = {}
        best = None
        best_val = -math.inf
        for r, v, h in self.options:
            key = (v, self.bounds(i, h)[0])
            if key not in pay_cache:
                pay_cache[key] = self.best_payment(i, v, h, paid.get(v, 0.0))
            pay, val = pay_cache[key]
            total = val - self._discrete_cost(state, r, v, h)
            if total > best_val:
                best_val, best = total, Action(r, v, h, pay)
        if best is None:
            # every option carries an unbounded disincentive
            r, v, h = self.options[0]
            best = Action(r, v, h, self.bounds(i, h)[1])
        return best, best_val


def _potential_fn(game: Game, prospect: ProspectModel | None) -> Callable[[Assignment], float]:
    if prospect is None:
        return lambda a: potential(game, a)
    return lambda a: prospect_potential(game, a, prospect)


def _welfare_fn(game: Game, prospect: ProspectModel | None) -> Callable[[Assignment], float]:
    if prospect is None:
        return lambda a: welfare(game, a)
    return lambda a: prospect_welfare(game, a, prospect)


def best_response(game: Game, assignment: Assignment, traveler: int, behavior: str = "rational",
                  config: BestResponseConfig = BestResponseConfig(),
                  prospect: ProspectModel | None = None) -> Action:
    """Utility-maximizing action of ``traveler`` against everyone else's actions."""
    model = _resolve(behavior, prospect)
    ev = _Evaluator(game, model, config)
    return ev.best_response(assignment.actions, traveler)[0]


def verify_nash(game: Game, assignment: Assignment, behavior: str = "rational",
                config: BestResponseConfig = BestResponseConfig(),
                prospect: ProspectModel | None = None) -> NashCheck:
    """Largest utility gain any traveler could get by deviating alone."""
    model = _resolve(behavior, prospect)
    game.check(assignment)
    ev = _Evaluator(game, model, config)
    gap, worst = -math.inf, None
    for i in range(game.size):
        state = ev._others_state(assignment.actions, i)
        _, best_val = ev.best_response(assignment.actions, i, state)
        g = best_val - ev.current_value(assignment.actions, i, state)
        if g > gap:
            gap, worst = g, i
    return NashCheck(gap <= config.improvement_epsilon, gap, worst)


def run_dynamics(game: Game, initial: Assignment, behavior: str = "rational",
                 config: BestResponseConfig = BestResponseConfig(),
                 prospect: ProspectModel | None = None, record_trace: bool = True) -> EquilibriumReport:
    """Round-robin best responses until nobody improves by more than epsilon."""
    model = _resolve(behavior, prospect)
    game.check(initial)
    ev = _Evaluator(game, model, config)
    phi = _potential_fn(game, model)
    actions = list(initial.actions)
    trace = [phi(initial)] if record_trace else []
    eps = config.improvement_epsilon
    rounds = 0
    converged = False
    while rounds < config.max_rounds:
        rounds += 1
        moved = 0
        for i in range(game.size):
            state = ev._others_state(actions, i)
            cand, cand_val = ev.best_response(actions, i, state)
            if cand_val > ev.current_value(actions, i, state) + eps:
                actions[i] = cand
                moved += 1
                if record_trace:
                    trace.append(phi(Assignment(game.network, tuple(actions))))
        if moved == 0:
            converged = True
            break
    final = Assignment(game.network, tuple(actions))
    if not converged:
        log.warning("dynamics hit max_rounds=%d without converging", config.max_rounds)
    return EquilibriumReport(
        assignment=final,
        is_nash=converged,
        welfare=_welfare_fn(game, model)(final),
        rounds_used=rounds,
        potential_trace=trace,
        gap=0.0 if converged else math.nan,
        converged=converged,
        behavior=behavior,
    )


def random_assignment(game: Game, rng: np.random.Generator) -> Assignment:
    """Uniformly random discrete choices; payments start at the type's base fare."""
    options = game.network.discrete_options()
    actions = []
    for i in range(game.size):
        r, v, h = options[int(rng.integers(len(options)))]
        actions.append(Action(r, v, h, initial_payment(game, i, h)))
    return Assignment(game.network, tuple(actions))


# social optimum ------------------------------------------------------------

class _WelfareModel:
    """Welfare of a discrete profile with payments optimized hub by hub.

    Payment terms only couple travelers at the same hub, so the optimal
    payments of a discrete profile split into independent per-hub problems.
    """

    def __init__(self, ev: _Evaluator, payment_cap: int):
        self.ev = ev
        self.payment_cap = payment_cap
        self._cohort_cache: dict = {}

    def discrete_cost(self, profile: Sequence[tuple[int, str, int]]) -> float:
        ev = self.ev
        n_eh: Counter = Counter()
        n_e: Counter = Counter()
        queue: Counter = Counter()
        cohort: Counter = Counter()
        for r, v, h in profile:
            for e in ev.route_edges[r]:
                n_eh[e, h] += 1
                n_e[e] += 1
            queue[v, h] += 1
            cohort[v] += 1
        load: dict[str, float] = dict.fromkeys(ev.road_xi, 0.0)
        for (e, h), n in n_eh.items():
            w, cap = ev.type_wc[h]
            load[e] += w * vehicle_count(n, cap)
        cong = 0.0
        for e, n in n_e.items():
            xi1, xi2 = ev.road_xi[e]
            cong += n * (xi1 * load[e] + xi2)
        wait = 0.0
        for r, v, h in profile:
            if not ev._is_terminal(v):
                q = queue[v, h] if ev.by_type else cohort[v]
                wait += q / ev.rate[v, h]
        return ev.zeta1 * cong + ev.zeta2 * wait

    def cohort_value(self, v: str, members: tuple[tuple[int, int], ...]) -> tuple[float, tuple[float, ...]]:
        """Best joint payments for ``members`` = ((traveler, type), ...) at hub ``v``."""
        key = (v, members)
        hit = self._cohort_cache.get(key)
        if hit is None:
            hit = self._optimize_cohort(v, members)
            self._cohort_cache[key] = hit
        return hit

    def _total(self, v: str, members, pays: Sequence[float]) -> float:
        ev = self.ev
        b = ev.budget[v]
        total = 0.0
        for (i, _), x in zip(members, pays):
            theta, theta_max, eta = ev.wallets[i]
            denom = theta + eta * x
            total -= theta_max / denom if denom > 0 else math.inf
        if b is None:
            return total
        P = math.fsum(pays)
        if ev.prospect is None:
            base = price_power(b - P, ev.p)
            for x in pays:
                total += price_power(b - P + x, ev.p) - base
        else:
            # wealth-neutral reference plus the subjective gain
            for x in pays:
                total += (P - x) ** 2 - P * P + ev.gain(v, x)
        return total

    def _optimize_cohort(self, v: str, members) -> tuple[float, tuple[float, ...]]:
        ev = self.ev
        if not members:
            return 0.0, ()
        bounds = [ev.bounds(i, h) for i, h in members]
        cfg = ev.config
        if ev.budget[v] is None:
            # no transfers: each traveler just minimizes the disincentive
            pays = tuple(hi for _, hi in bounds)
            return self._total(v, members, pays), pays
        if cfg.payment_solver == "grid":
            grids = [payment_grid(lo, hi, cfg.grid_points) for lo, hi in bounds]
            if math.prod(len(g) for g in grids) <= self.payment_cap:
                best = (-math.inf, ())
                for pays in itertools.product(*grids):
                    val = self._total(v, members, pays)
                    if val > best[0]:
                        best = (val, tuple(float(x) for x in pays))
                return best
        starts = [tuple(lo for lo, _ in bounds), tuple(hi for _, hi in bounds)]
        if ev.prospect is None and ev.p == 2.0:
            # cheap closed-form coordinates: try concentrating payment on each member
            for k in range(len(members)):
                starts.append(tuple(hi if j == k else lo for j, (lo, hi) in enumerate(bounds)))
        else:
            # even split of the budget, and all of it on the most and least sensitive members
            share = max(ev.budget[v], 0.0) / len(members)
            starts.append(tuple(min(max(share, lo), hi) for lo, hi in bounds))
            etas = [ev.wallets[i][2] for i, _ in members]
            for k in {int(np.argmax(etas)), int(np.argmin(etas))}:
                starts.append(tuple(min(max(ev.budget[v], lo), hi) if j == k else lo
                                    for j, (lo, hi) in enumerate(bounds)))
        best = (-math.inf, ())
        for start in starts:
            val, pays = self._coordinate_ascent(v, members, bounds, list(start))
            if val > best[0]:
                best = (val, pays)
        return best

    def _coordinate_fn(self, v: str, members, pays: list[float], k: int) -> Callable[[float], float]:
        """Cohort value as a function of member ``k``'s payment, others held fixed."""
        ev = self.ev
        b = ev.budget[v]
        i = members[k][0]
        theta, theta_max, eta = ev.wallets[i]
        rest = [x for j, x in enumerate(pays) if j != k]
        others = math.fsum(rest)
        sq = math.fsum(x * x for x in rest)
        g_rest = 0.0
        for (j, _), x in zip(members, pays):
            if j != i:
                d = ev.wallets[j][0] + ev.wallets[j][2] * x
                g_rest += ev.wallets[j][1] / d if d > 0 else math.inf

        def g(x):
            d = theta + eta * x
            return theta_max / d if d > 0 else math.inf

        if ev.prospect is not None:
            gain_rest = math.fsum(ev.gain(v, x) for x in rest)

            # reference points sum to sum_j [(P - x_j)^2 - P^2] = sum_j x_j^2 - 2 P^2
            def f(x):
                x = np.asarray(x, dtype=float)
                total = others + x
                return (sq + x * x - 2.0 * total * total + gain_rest + ev.gain(v, x)
                        - theta_max / (theta + eta * x) - g_rest)
            return f
        if ev.p == 2.0:
            # sum_j F(c + x_j) - F(c) with c = b - P telescopes to 2cP + sum x_j^2
            def f(x):
                total = others + x
                return 2.0 * (b - total) * total + sq + x * x - g(x) - g_rest
            return f

        shifts = np.asarray(rest, dtype=float)
        p = ev.p

        # vectorized over candidate payments for the zoom search
        def f(x):
            x = np.asarray(x, dtype=float)
            c = b - others - x
            base = np.abs(c) ** p
            val = (np.abs(c + x) ** p - base
                   + (np.abs(np.add.outer(c, shifts)) ** p).sum(axis=-1) - len(rest) * base)
            d = theta + eta * x
            return val - theta_max / d - g_rest
        return f

    def _coordinate_ascent(self, v, members, bounds, pays: list[float]):
        ev = self.ev
        cfg = ev.config
        concave = ev.prospect is None and ev.p == 2.0
        current = self._total(v, members, pays)
        for _ in range(500):
            before = current
            for k, (lo, hi) in enumerate(bounds):
                f = self._coordinate_fn(v, members, pays, k)
                if cfg.payment_solver == "grid":
                    xs = payment_grid(lo, hi, cfg.grid_points)
                    vals = [f(float(x)) for x in xs]
                    j = int(np.argmax(vals))
                    x, fx = float(xs[j]), vals[j]
                elif concave:
                    # each coordinate is concave for the quadratic mechanism
                    x, fx = golden_section_max(f, lo, hi, cfg.payment_tolerance)
                else:
                    x, fx = zoom_grid_max(f, lo, hi, cfg.payment_tolerance)
                if fx > current:
                    pays[k], current = x, fx
            if current - before <= 1e-12 * max(1.0, abs(current)):
                break
        return self._total(v, members, pays), tuple(pays)

    def evaluate(self, profile: Sequence[tuple[int, str, int]]):
        groups: dict[str, list[tuple[int, int]]] = {}
        for i, (r, v, h) in enumerate(profile):
            groups.setdefault(v, []).append((i, h))
        total = -self.discrete_cost(profile)
        payments: dict[int, float] = {}
        for v, members in groups.items():
            val, pays = self.cohort_value(v, tuple(members))
            total += val
            for (i, _), x in zip(members, pays):
                payments[i] = x
        return total, payments


def social_optimum(game: Game, behavior: str = "rational",
                   config: BestResponseConfig = BestResponseConfig(),
                   prospect: ProspectModel | None = None, *,
                   enumeration_cap: int = 50_000, payment_cap: int = 10_000,
                   n_starts: int = 8, seed: int = 0,
                   extra_starts: Iterable[Assignment] = ()) -> EquilibriumReport:
    """Maximize social welfare.

    Small instances enumerate every discrete profile exactly; larger ones
    fall back to multi-start coordinate ascent over discrete choices and the
    report is flagged ``heuristic``. Payments are optimized per hub.
    """
    model = _resolve(behavior, prospect)
    ev = _Evaluator(game, model, config)
    wm = _WelfareModel(ev, payment_cap)
    options = ev.options
    size = game.size
    heuristic = len(options) ** size > enumeration_cap

    best_val, best_profile, best_pay = -math.inf, None, None
    if not heuristic:
        for profile in itertools.product(options, repeat=size):
            val, pay = wm.evaluate(profile)
            if val > best_val:
                best_val, best_profile, best_pay = val, profile, pay
    else:
        rng = np.random.default_rng(seed)
        starts = [[a.discrete for a in s.actions] for s in extra_starts]
        for _ in range(n_starts):
            starts.append([options[int(rng.integers(len(options)))] for _ in range(size)])
        seen = set()
        for start in starts:
            if tuple(start) in seen:
                continue
            seen.add(tuple(start))
            val, profile, pay = _discrete_ascent(wm, options, list(start))
            if val > best_val:
                best_val, best_profile, best_pay = val, profile, pay

    actions = tuple(Action(r, v, h, best_pay[i]) for i, (r, v, h) in enumerate(best_profile))
    result = Assignment(game.network, actions)
    return EquilibriumReport(
        assignment=result,
        is_nash=verify_nash(game, result, behavior, config, prospect).is_nash,
        welfare=_welfare_fn(game, model)(result),
        rounds_used=0,
        heuristic=heuristic,
        behavior=behavior,
    )


def _discrete_ascent(wm: _WelfareModel, options, profile: list):
    val, pay = wm.evaluate(profile)
    improved = True
    while improved:
        improved = False
        for i in range(len(profile)):
            keep = profile[i]
            for opt in options:
                if opt == keep:
                    continue
                profile[i] = opt
                cand, cand_pay = wm.evaluate(profile)
                if cand > val + 1e-12 * max(1.0, abs(val)):
                    val, pay, keep, improved = cand, cand_pay, opt, True
            profile[i] = keep
    return val, tuple(profile), pay


# price of anarchy ----------------------------------------------------------

def poa_bound(game: Game) -> float:
    """Upper bound ``2 + (5/I) * sum_v b(v)**2`` over budget-carrying hubs."""
    b2 = sum(v.budget ** 2 for v in game.network.budget_hubs)
    return 2.0 + 5.0 / game.size * b2


@dataclass
class PoAReport:
    """Price of anarchy from multi-start dynamics.

    The worst discovered equilibrium stands in for the worst equilibrium,
    so ``poa`` is a lower estimate. ``convention`` is ``"welfare"`` when
    both welfares are positive (optimum over worst equilibrium), ``"cost"``
    when both are negative (worst-equilibrium cost over optimal cost), and
    ``"undefined"`` otherwise.
    """

    poa: float | None
    convention: str
    bound: float
    welfare_opt: float
    welfare_worst_nash: float
    welfare_best_nash: float
    equilibria: list[EquilibriumReport]
    optimum: EquilibriumReport
    converged_runs: int
    total_runs: int
    rounds: int
    lower_bound_estimate: bool = True

    @property
    def converged(self) -> bool:
        return self.converged_runs == self.total_runs


def poa_ratio(welfare_opt: float, welfare_nash: float) -> tuple[float | None, str]:
    if welfare_nash > 0 and welfare_opt > 0:
        return welfare_opt / welfare_nash, "welfare"
    if welfare_nash < 0 and welfare_opt < 0:
        return welfare_nash / welfare_opt, "cost"
    return None, "undefined"


def price_of_anarchy(game: Game, behavior: str = "rational",
                     config: BestResponseConfig = BestResponseConfig(),
                     prospect: ProspectModel | None = None, *, n_starts: int = 50, seed: int = 0,
                     welfare_prospect: ProspectModel | None = None,
                     optimum_starts: int = 8, enumeration_cap: int = 50_000) -> PoAReport:
    """Optimal welfare against the worst equilibrium found from ``n_starts`` random starts.

    ``welfare_prospect`` measures welfare (and the optimum) with a different
    prospect model than the one driving behavior; by default the behavior's
    own utilities are used.
    """
    model = _resolve(behavior, prospect)
    measure = welfare_prospect if welfare_prospect is not None else model
    measure_behavior = "prospect" if measure is not None else "rational"
    wfn = _welfare_fn(game, measure)

    rng = np.random.default_rng(seed)
    runs = []
    for _ in range(n_starts):
        start = random_assignment(game, rng)
        runs.append(run_dynamics(game, start, behavior, config, model, record_trace=False))
    nash = [r for r in runs if r.converged]
    if not nash:
        raise NoEquilibriumError(f"none of {n_starts} dynamics runs converged")
    nash_welfare = [wfn(r.assignment) for r in nash]

    optimum = social_optimum(game, measure_behavior, config, measure,
                             enumeration_cap=enumeration_cap, n_starts=optimum_starts, seed=seed,
                             extra_starts=[r.assignment for r in nash])
    w_opt = optimum.welfare
    w_worst = min(nash_welfare)
    w_best = max(nash_welfare)
    if w_best > w_opt:
        # an equilibrium is itself a feasible profile
        best = nash[int(np.argmax(nash_welfare))]
        optimum = EquilibriumReport(best.assignment, True, w_best, 0, heuristic=True,
                                    behavior=measure_behavior)
        w_opt = w_best
    poa, convention = poa_ratio(w_opt, w_worst)
    return PoAReport(
        poa=poa,
        convention=convention,
        bound=poa_bound(game),
        welfare_opt=w_opt,
        welfare_worst_nash=w_worst,
        welfare_best_nash=w_best,
        equilibria=nash,
        optimum=optimum,
        converged_runs=len(nash),
        total_runs=len(runs),
        rounds=max(r.rounds_used for r in runs),
    )
