"""Bounded-horizon policy search over (seeds-per-intervention, wait-time)
schedules with a random-forest surrogate and expected-improvement
acquisition, plus a uniform random-search baseline.

A configuration is `p` integer pairs repeated cyclically until the
horizon or the budget/target is exhausted. Instances are bundle seeds,
each expanding deterministically to 10 world seeds, so a configuration's
score is a pure function of (config, instances, master seed).
"""

import math
import random
from dataclasses import dataclass, field

import numpy as np
from sklearn.ensemble import RandomForestRegressor

from .mintss import MintssSpec, mintss_adaptive
from .policies import PolicySpec, run_adaptive
from .util import derive_seed
from .worlds import sample_world

WORLDS_PER_INSTANCE = 10


@dataclass(frozen=True)
class PolicyConfig:
    pairs: tuple  # ((s_1, t_1), ..., (s_p, t_p)), integers

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("policy complexity must be >= 1")
        for s, t in self.pairs:
            if s < 1 or t < 1:
                raise ValueError("pair values must be >= 1")

    @property
    def complexity(self):
        return len(self.pairs)

    def flat(self):
        return tuple(x for pair in self.pairs for x in pair)


@dataclass(frozen=True)
class Instance:
    bundle_seed: int

    def world_seeds(self):
        return [derive_seed(self.bundle_seed, j) for j in range(WORLDS_PER_INSTANCE)]


@dataclass
class TunerBudget:
    max_evaluations: int = 500
    train_instances: int = 1000
    test_instances: int = 50
    surrogate_time_cap: float = 100.0


@dataclass(frozen=True)
class Objective:
    problem: str  # "im" | "mintss"
    k: int = 0
    Q: float = 0.0
    lambda1: float = 10.0  # penalty for missing the target (inferred default)
    lambda2: float = 1.0  # penalty for overshooting (inferred default)
    hinge: bool = True  # literal linear penalties behind a flag


def unroll(config, budget_or_target, horizon, problem="im"):
    """Static intervention schedule [(time, batch)] implied by a config.

    For IM, stops at the horizon or when the budget runs out; a final
    short intervention spends the remaining seeds. MINTSS stopping on the
    observed spread is dynamic and handled at run time, so here the
    schedule is unrolled to the horizon only.
    """
    out = []
    t = 0
    i = 0
    remaining = int(budget_or_target) if problem == "im" else None
    while t < horizon:
        s, wait = config.pairs[i % len(config.pairs)]
        if remaining is not None:
            if remaining <= 0:
                break
            if remaining < s:
                s = remaining
            remaining -= s
        out.append((t, s))
        t += wait
        i += 1
    return out


@dataclass
class EvalRecord:
    config: PolicyConfig
    objective: float
    instance_id: int
    incumbent: float


def _policy_spec_for(objective, config, horizon, rr_count, epsilon):
    if objective.problem == "im":
        return PolicySpec(
            kind="adaptive", k=objective.k, batch_size=max(1, config.pairs[0][0]),
            horizon=horizon, regen="lazy", epsilon=epsilon, rr_count=rr_count,
            schedule=config,
        )
    return MintssSpec(
        Q=objective.Q, batch_size=max(1, config.pairs[0][0]), horizon=horizon,
        epsilon=epsilon, rr_count=rr_count, schedule=config,
    )


def run_config_once(g, config, objective, horizon, world, run_seed, rr_count=None, epsilon=0.5):
    spec = _policy_spec_for(objective, config, horizon, rr_count, epsilon)
    if objective.problem == "im":
        trace = run_adaptive(g, spec, world, run_seed)
        return -float(trace.final_active), trace
    trace = mintss_adaptive(g, spec, world, run_seed)
    f = float(trace.final_active)
    gx = float(trace.seeds_used)
    if objective.hinge:
        pen = objective.lambda1 * max(0.0, objective.Q - f) + objective.lambda2 * max(0.0, f - objective.Q)
    else:
        pen = objective.lambda1 * (objective.Q - f) + objective.lambda2 * (f - objective.Q)
    return gx + pen, trace


def evaluate_config(g, config, objective, instances, horizon, master_seed, rr_count=None, epsilon=0.5):
    """Mean objective over all worlds of all given instances."""
    if not instances:
        raise ValueError("at least one instance required")
    vals = []
    for inst in instances:
        for j, ws in enumerate(inst.world_seeds()):
            world = sample_world(g, ws)
            run_seed = derive_seed(master_seed, derive_seed(inst.bundle_seed, j))
            v, _ = run_config_once(g, config, objective, horizon, world, run_seed,
                                   rr_count=rr_count, epsilon=epsilon)
            vals.append(v)
    return float(np.mean(vals))


class ConfigSpace:
    """Integer box: p pairs with s in [1, s_max] and t in [1, t_max]."""

    def __init__(self, complexity, s_max=100, t_max=10):
        if complexity < 1 or s_max < 1 or t_max < 1:
            raise ValueError("invalid space")
        self.complexity = complexity
        self.s_max = s_max
        self.t_max = t_max

    @property
    def dim(self):
        return 2 * self.complexity

    def size(self):
        return (self.s_max * self.t_max) ** self.complexity

    def sample(self, rng):
        pairs = tuple(
            (rng.randrange(1, self.s_max + 1), rng.randrange(1, self.t_max + 1))
            for _ in range(self.complexity)
        )
        return PolicyConfig(pairs)

    def clip(self, flat):
        out = []
        for j, x in enumerate(flat):
            hi = self.s_max if j % 2 == 0 else self.t_max
            out.append(min(max(int(x), 1), hi))
        return PolicyConfig(tuple(zip(out[0::2], out[1::2])))

    def enumerate_all(self):
        def rec(prefix, depth):
            if depth == self.complexity:
                yield PolicyConfig(tuple(prefix))
                return
            for s in range(1, self.s_max + 1):
                for t in range(1, self.t_max + 1):
                    yield from rec(prefix + [(s, t)], depth + 1)
        yield from rec([], 0)

    def neighbors(self, config, steps=(1, 2, 5, 10)):
        flat = list(config.flat())
        out = set()
        for j in range(len(flat)):
            for d in steps:
                for sign in (1, -1):
                    cand = list(flat)
                    cand[j] += sign * d
                    out.add(self.clip(cand))
        out.discard(config)
        return sorted(out, key=lambda c: c.flat())


def _expected_improvement(mu, sigma, best):
    sigma = np.maximum(sigma, 1e-9)
    z = (best - mu) / sigma
    phi = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    cdf = 0.5 * (1.0 + _erf_vec(z / math.sqrt(2)))
    return (best - mu) * cdf + sigma * phi


def _erf_vec(x):
    return np.vectorize(math.erf)(x)


class _RunCache:
    """Per-(config, instance) objective cache; every miss costs one unit
    of the evaluation budget."""

    def __init__(self, eval_fn, budget):
        self.eval_fn = eval_fn
        self.budget = budget
        self.used = 0
        self.cache = {}
        self.history = []

    def run(self, config, instance_id, incumbent_obj):
        key = (config, instance_id)
        if key in self.cache:
            return self.cache[key]
        if self.used >= self.budget:
            raise _BudgetExhausted
        v = float(self.eval_fn(config, instance_id))
        self.used += 1
        self.cache[key] = v
        self.history.append(EvalRecord(config, v, instance_id, incumbent_obj))
        return v

    def mean(self, config, instance_ids):
        return float(np.mean([self.cache[(config, i)] for i in instance_ids]))

    def instances_of(self, config):
        return sorted(i for (c, i) in self.cache if c == config)


class _BudgetExhausted(Exception):
    pass


@dataclass
class TuneResult:
    best: PolicyConfig
    best_objective: float
    history: list = field(repr=False, default_factory=list)
    evaluations: int = 0


def tune(space, eval_fn, budget, strategy="smbo", seed=0, num_instances=None):
    """Minimize eval_fn(config, instance_id) over the space.

    smbo: random initial design, random-forest surrogate predicting mean
    and spread, expected improvement over the incumbent (interleaved with
    predicted-mean exploitation and occasional random picks), and
    intensification on a growing shared instance subset. random-search:
    uniform configs at the same budget.
    """
    rng = random.Random(seed)
    n_inst = num_instances if num_instances is not None else budget.train_instances
    cache = _RunCache(eval_fn, budget.max_evaluations)

    n_init = min(max(10, 2 * space.dim), space.size())
    if budget.max_evaluations < n_init:
        raise ValueError("budget smaller than initial design")

    incumbent = None
    inc_obj = math.inf
    inc_insts = [0]  # shared instance subset, grown during intensification

    def challenge(cand):
        nonlocal incumbent, inc_obj, inc_insts
        try:
            for i in inc_insts:
                cache.run(cand, i, inc_obj)
        except _BudgetExhausted:
            raise
        cand_mean = cache.mean(cand, inc_insts)
        if incumbent is None or cand_mean <= cache.mean(incumbent, inc_insts):
            incumbent = cand
            inc_obj = cand_mean
        elif len(inc_insts) < n_inst and rng.random() < 0.25:
            # challenger lost: occasionally grow the shared subset
            new_i = len(inc_insts)
            inc_insts = inc_insts + [new_i]
            cache.run(incumbent, new_i, inc_obj)
            inc_obj = cache.mean(incumbent, inc_insts)

    seen = set()

    def fresh(cand):
        if cand in seen:
            return False
        seen.add(cand)
        return True

    try:
        init = []
        attempts = 0
        while len(init) < n_init and attempts < 100 * n_init:
            c = space.sample(rng)
            attempts += 1
            if fresh(c):
                init.append(c)
        for c in init:
            challenge(c)

        if strategy == "random-search":
            while len(seen) < space.size():
                c = space.sample(rng)
                if not fresh(c):
                    continue
                challenge(c)
        elif strategy == "smbo":
            it = 0
            while True:
                xs = sorted({c for (c, _i) in cache.cache}, key=lambda c: c.flat())
                X = np.array([c.flat() for c in xs], dtype=float)
                y = np.array([cache.mean(c, cache.instances_of(c)) for c in xs])
                rf = RandomForestRegressor(
                    n_estimators=30, min_samples_leaf=1, random_state=derive_seed(seed, it) % (2**31)
                )
                rf.fit(X, y)

                cands = _candidates(space, rng, incumbent, seen)
                if not cands:
                    break
                C = np.array([c.flat() for c in cands], dtype=float)
                preds = np.stack([t.predict(C) for t in rf.estimators_])
                mu, sigma = preds.mean(axis=0), preds.std(axis=0)

                if it % 3 == 2:
                    pick = cands[int(rng.randrange(len(cands)))]
                elif it % 3 == 1:
                    pick = cands[int(np.argmin(mu))]
                else:
                    ei = _expected_improvement(mu, sigma, inc_obj)
                    pick = cands[int(np.argmax(ei))]
                fresh(pick)
                challenge(pick)
                it += 1
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
    except _BudgetExhausted:
        pass

    return TuneResult(best=incumbent, best_objective=inc_obj,
                      history=cache.history, evaluations=cache.used)


def _candidates(space, rng, incumbent, seen, pool=2000, enum_limit=20000):
    if space.size() <= enum_limit:
        cands = [c for c in space.enumerate_all() if c not in seen]
    else:
        cands = []
        tries = 0
        while len(cands) < pool and tries < pool * 4:
            c = space.sample(rng)
            tries += 1
            if c not in seen:
                cands.append(c)
        if incumbent is not None:
            cands.extend(c for c in space.neighbors(incumbent) if c not in seen)
        cands = sorted(set(cands), key=lambda c: c.flat())
    return cands


def report_policy(g, best, objective, horizon, test_instances, master_seed,
                  rr_count=None, epsilon=0.5):
    """Held-out evaluation of the best config: Table row with horizon,
    mean shortfall, mean seeds, mean objective and the policy pairs."""
    shortfalls, seeds, objs = [], [], []
    for inst in test_instances:
        for j, ws in enumerate(inst.world_seeds()):
            world = sample_world(g, ws)
            run_seed = derive_seed(master_seed, derive_seed(inst.bundle_seed, j))
            v, trace = run_config_once(g, best, objective, horizon, world, run_seed,
                                       rr_count=rr_count, epsilon=epsilon)
            objs.append(v)
            seeds.append(trace.seeds_used)
            if objective.problem == "mintss":
                shortfalls.append(max(0.0, objective.Q - trace.final_active))
            else:
                shortfalls.append(0.0)
    return {
        "T": horizon,
        "shortfall": float(np.mean(shortfalls)),
        "seeds": float(np.mean(seeds)),
        "objective": float(np.mean(objs)),
        "pairs": best.pairs,
    }
