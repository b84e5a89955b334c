"""Pure-Python compute kernels (reference backend).

This module and its compiled twin (``_native``, Cython) implement the same
operations with the same floating-point operation order, so a run produces
bit-identical traces on either backend. Any edit here must be mirrored
there, and vice versa; tests/test_backends.py pins the equivalence.

Random stream
-------------
xoshiro256** (Blackman & Vigna) with the state expanded from the 64-bit
seed by four consecutive splitmix64 steps. Doubles come from the top 53
bits: (u64 >> 11) * 2**-53, uniform on [0, 1). Integer draws below n use
u64 % n (bias is negligible for the small n used here).

Draw order
----------
Every stochastic draw of a run flows through one stream, in a fixed order:

* continuous init: member-major, dimension-minor uniforms in bounds
* pso_step: per particle, per dimension: r1 then r2
* abc_step: employed moves (per source: partner, dimension, phi), then
  one selection draw plus a move per onlooker, then scout reinit uniforms
* fa_step: mover-major, target-minor pair sweep, one uniform per moved
  dimension; the brightest firefly draws its random-walk uniforms at its
  own turn in the sweep
* aco_step: per ant, one start draw then one roulette draw per edge
* iwd_step: m partial Fisher-Yates draws for distinct starts, then
  lockstep construction (edge-major, drop-minor), one roulette draw each
* random_tours: per tour, n-1 Fisher-Yates draws
"""

import math

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
_DOUBLE_SCALE = 1.0 / (1 << 53)
_TWO_PI = 6.283185307179586

OBJ_SPHERE = 0
OBJ_RASTRIGIN = 1
OBJ_ROSENBROCK = 2
OBJ_ACKLEY = 3

# zero-distance guard for ACO visibility: eta = 1 / max(d, ETA_FLOOR)
ETA_FLOOR = 1e-9


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK64


class RandomStream:
    """Deterministic xoshiro256** stream, splitmix64-seeded."""

    __slots__ = ("seed", "_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed):
        seed = int(seed)
        if seed < 0 or seed > MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")
        self.seed = seed
        x = seed
        state = []
        for _ in range(4):
            x = (x + 0x9E3779B97F4A7C15) & MASK64
            z = x
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
            state.append(z ^ (z >> 31))
        if state[0] == 0 and state[1] == 0 and state[2] == 0 and state[3] == 0:
            state[0] = 1  # xoshiro forbids the all-zero state
        self._s0, self._s1, self._s2, self._s3 = state

    def next_u64(self):
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def random(self):
        """Uniform double on [0, 1)."""
        return (self.next_u64() >> 11) * _DOUBLE_SCALE

    def uniform(self, a, b):
        return a + (b - a) * self.random()

    def randbelow(self, n):
        """Uniform integer in [0, n)."""
        return self.next_u64() % n

    def state(self):
        return (self._s0, self._s1, self._s2, self._s3)


# ---------------------------------------------------------------------------
# objectives

def eval_objective(code, x):
    n = len(x)
    if code == OBJ_SPHERE:
        s = 0.0
        for d in range(n):
            xi = float(x[d])
            s += xi * xi
        return s
    if code == OBJ_RASTRIGIN:
        s = 0.0
        for d in range(n):
            xi = float(x[d])
            s += xi * xi - 10.0 * math.cos(_TWO_PI * xi)
        return 10.0 * n + s
    if code == OBJ_ROSENBROCK:
        s = 0.0
        for d in range(n - 1):
            a = float(x[d + 1]) - float(x[d]) * float(x[d])
            b = 1.0 - float(x[d])
            s += 100.0 * (a * a) + b * b
        return s
    if code == OBJ_ACKLEY:
        sq = 0.0
        cs = 0.0
        for d in range(n):
            xi = float(x[d])
            sq += xi * xi
            cs += math.cos(_TWO_PI * xi)
        return (-20.0 * math.exp(-0.2 * math.sqrt(sq / n))
                - math.exp(cs / n) + 20.0 + math.e)
    raise ValueError(f"unknown objective code {code!r}")


def init_positions(count, lower, upper, stream):
    dim = len(lower)
    out = np.empty((count, dim))
    for i in range(count):
        for d in range(dim):
            out[i, d] = stream.uniform(float(lower[d]), float(upper[d]))
    return out


# ---------------------------------------------------------------------------
# PSO

def pso_step(obj_code, x, v, values, pbest, pbest_values, gbest, gbest_value,
             lower, upper, vmax, w, c1, c2, stream):
    """One synchronous-position, asynchronous-best PSO sweep.

    Mutates x, v, values, pbest, pbest_values, gbest in place and returns
    the updated global best value. Bound handling: clamp the position and
    zero the violating velocity component.
    """
    count, dim = x.shape
    for i in range(count):
        for d in range(dim):
            r1 = stream.random()
            r2 = stream.random()
            xi = float(x[i, d])
            vel = (w * float(v[i, d])
                   + c1 * r1 * (float(pbest[i, d]) - xi)
                   + c2 * r2 * (float(gbest[d]) - xi))
            vm = float(vmax[d])
            if vel > vm:
                vel = vm
            elif vel < -vm:
                vel = -vm
            xi = xi + vel
            lo = float(lower[d])
            hi = float(upper[d])
            if xi < lo:
                xi = lo
                vel = 0.0
            elif xi > hi:
                xi = hi
                vel = 0.0
            x[i, d] = xi
            v[i, d] = vel
        f = eval_objective(obj_code, x[i])
        values[i] = f
        if f < float(pbest_values[i]):
            pbest_values[i] = f
            for d in range(dim):
                pbest[i, d] = x[i, d]
            if f < gbest_value:
                gbest_value = f
                for d in range(dim):
                    gbest[d] = x[i, d]
    return gbest_value


# ---------------------------------------------------------------------------
# ABC

def abc_fitness(f):
    if f >= 0.0:
        return 1.0 / (1.0 + f)
    return 1.0 + abs(f)


def abc_onlooker_probs(fitness):
    n = len(fitness)
    total = 0.0
    for i in range(n):
        total += float(fitness[i])
    out = np.empty(n)
    for i in range(n):
        out[i] = float(fitness[i]) / total
    return out


def _abc_neighbor_move(obj_code, xs, f, trials, lower, upper, stream, i):
    count, dim = xs.shape
    k = stream.randbelow(count - 1)
    if k >= i:
        k += 1
    j = stream.randbelow(dim)
    phi = stream.uniform(-1.0, 1.0)
    old = float(xs[i, j])
    val = old + phi * (old - float(xs[k, j]))
    lo = float(lower[j])
    hi = float(upper[j])
    if val < lo:
        val = lo
    elif val > hi:
        val = hi
    xs[i, j] = val
    cand = eval_objective(obj_code, xs[i])
    if cand < float(f[i]):
        f[i] = cand
        trials[i] = 0
    else:
        xs[i, j] = old
        trials[i] += 1


def abc_step(obj_code, xs, f, trials, lower, upper, limit, stream):
    """Employed, onlooker and scout phases over the food sources.

    Onlooker probabilities are computed once from the post-employed values
    and held fixed for the SN selections. At most one scout fires per
    iteration: the source with the largest trial counter, ties to the
    lowest index, and only if its counter exceeds the limit.
    """
    count, dim = xs.shape
    for i in range(count):
        _abc_neighbor_move(obj_code, xs, f, trials, lower, upper, stream, i)
    fits = np.empty(count)
    total = 0.0
    for i in range(count):
        fit = abc_fitness(float(f[i]))
        fits[i] = fit
        total += fit
    for _ in range(count):
        u = stream.random()
        threshold = u * total
        acc = 0.0
        chosen = count - 1
        for i in range(count):
            acc += float(fits[i])
            if threshold < acc:
                chosen = i
                break
        _abc_neighbor_move(obj_code, xs, f, trials, lower, upper, stream, chosen)
    worst = 0
    for i in range(1, count):
        if trials[i] > trials[worst]:
            worst = i
    if trials[worst] > limit:
        for d in range(dim):
            xs[worst, d] = stream.uniform(float(lower[d]), float(upper[d]))
        f[worst] = eval_objective(obj_code, xs[worst])
        trials[worst] = 0


# ---------------------------------------------------------------------------
# FA

def fa_attractiveness(r, beta0, gamma):
    return beta0 * math.exp(-gamma * (r * r))


def fa_step(obj_code, x, f, lower, upper, beta0, gamma, alpha_t, stream):
    """One firefly sweep: every firefly moves toward each strictly brighter
    one, using pre-sweep brightness but in-sweep positions; the brightest
    firefly only random-walks. Values are refreshed after all moves.
    """
    count, dim = x.shape
    best = 0
    for i in range(1, count):
        if float(f[i]) < float(f[best]):
            best = i
    for i in range(count):
        if i == best:
            for d in range(dim):
                u = stream.random()
                lo = float(lower[d])
                hi = float(upper[d])
                xi = float(x[i, d]) + alpha_t * (u - 0.5) * (hi - lo)
                if xi < lo:
                    xi = lo
                elif xi > hi:
                    xi = hi
                x[i, d] = xi
            continue
        fi = float(f[i])
        for j in range(count):
            if float(f[j]) < fi:
                s = 0.0
                for d in range(dim):
                    diff = float(x[i, d]) - float(x[j, d])
                    s += diff * diff
                r = math.sqrt(s)
                beta = beta0 * math.exp(-gamma * (r * r))
                for d in range(dim):
                    u = stream.random()
                    lo = float(lower[d])
                    hi = float(upper[d])
                    xi = (float(x[i, d])
                          + beta * (float(x[j, d]) - float(x[i, d]))
                          + alpha_t * (u - 0.5) * (hi - lo))
                    if xi < lo:
                        xi = lo
                    elif xi > hi:
                        xi = hi
                    x[i, d] = xi
    for i in range(count):
        f[i] = eval_objective(obj_code, x[i])


# ---------------------------------------------------------------------------
# tours

def tour_length(dist, tour):
    n = len(tour)
    total = 0.0
    for k in range(n):
        a = int(tour[k])
        b = int(tour[k + 1]) if k + 1 < n else int(tour[0])
        total += float(dist[a, b])
    return total


def random_tours(n, tours, stream):
    count = tours.shape[0]
    for a in range(count):
        for k in range(n):
            tours[a, k] = k
        for i in range(n - 1):
            j = i + stream.randbelow(n - i)
            t = tours[a, i]
            tours[a, i] = tours[a, j]
            tours[a, j] = t


# ---------------------------------------------------------------------------
# ACO (Ant System)

def _aco_edge_weight(tau_ij, dist_ij, alpha, beta):
    d = dist_ij
    if d < ETA_FLOOR:
        d = ETA_FLOOR
    eta = 1.0 / d
    return (tau_ij ** alpha) * (eta ** beta)


def aco_transition_probs(current, visited, tau, dist, alpha, beta):
    """Full-length probability vector; zero at visited nodes.

    visited is a uint8 mask that must include the current node and leave
    at least one node unvisited.
    """
    n = tau.shape[0]
    out = np.zeros(n)
    total = 0.0
    for j in range(n):
        if visited[j]:
            continue
        w = _aco_edge_weight(float(tau[current, j]), float(dist[current, j]),
                             alpha, beta)
        out[j] = w
        total += w
    for j in range(n):
        if not visited[j]:
            out[j] = float(out[j]) / total
    return out


def _roulette(weights, visited, n, u, total):
    threshold = u * total
    acc = 0.0
    last = -1
    for j in range(n):
        if visited[j]:
            continue
        last = j
        acc += float(weights[j])
        if threshold < acc:
            return j
    return last  # absorbs rounding residue


def aco_construct_tour(start, tau, dist, alpha, beta, stream, tour_out):
    n = tau.shape[0]
    visited = np.zeros(n, dtype=np.uint8)
    weights = np.empty(n)
    tour_out[0] = start
    visited[start] = 1
    current = start
    for pos in range(1, n):
        total = 0.0
        for j in range(n):
            if visited[j]:
                weights[j] = 0.0
                continue
            w = _aco_edge_weight(float(tau[current, j]),
                                 float(dist[current, j]), alpha, beta)
            weights[j] = w
            total += w
        u = stream.random()
        nxt = _roulette(weights, visited, n, u, total)
        tour_out[pos] = nxt
        visited[nxt] = 1
        current = nxt


def aco_pheromone_update(tau, tours, lengths, rho, q, tau_min):
    """Evaporate every edge, deposit q/L per ant edge (both orientations),
    then clamp at the floor."""
    n = tau.shape[0]
    count = tours.shape[0]
    for a in range(count):
        if not float(lengths[a]) > 0.0:
            raise ValueError(f"tour length must be positive, got {lengths[a]}")
    for i in range(n):
        for j in range(i + 1, n):
            val = (1.0 - rho) * float(tau[i, j])
            tau[i, j] = val
            tau[j, i] = val
    for a in range(count):
        deposit = q / float(lengths[a])
        for k in range(n):
            u = int(tours[a, k])
            v = int(tours[a, k + 1]) if k + 1 < n else int(tours[a, 0])
            tau[u, v] = float(tau[u, v]) + deposit
            tau[v, u] = float(tau[v, u]) + deposit
    for i in range(n):
        for j in range(i + 1, n):
            if float(tau[i, j]) < tau_min:
                tau[i, j] = tau_min
                tau[j, i] = tau_min


def aco_step(dist, tau, tours, lengths, alpha, beta, rho, q, tau_min, stream):
    n = dist.shape[0]
    count = tours.shape[0]
    for a in range(count):
        start = stream.randbelow(n)
        aco_construct_tour(start, tau, dist, alpha, beta, stream, tours[a])
        lengths[a] = tour_length(dist, tours[a])
    aco_pheromone_update(tau, tours, lengths, rho, q, tau_min)


# ---------------------------------------------------------------------------
# IWD

def iwd_edge_probs(current, visited, soil, eps):
    """Full-length probability vector over unvisited nodes.

    g shifts soils by the minimum when any unvisited soil is negative, so
    the least-soiled edge always gets the largest probability.
    """
    n = soil.shape[0]
    minsoil = 0.0
    first = True
    for j in range(n):
        if visited[j]:
            continue
        s = float(soil[current, j])
        if first or s < minsoil:
            minsoil = s
            first = False
    out = np.zeros(n)
    total = 0.0
    for j in range(n):
        if visited[j]:
            continue
        s = float(soil[current, j])
        g = s if minsoil >= 0.0 else s - minsoil
        fval = 1.0 / (eps + g)
        out[j] = fval
        total += fval
    for j in range(n):
        if not visited[j]:
            out[j] = float(out[j]) / total
    return out


def iwd_move(vel, drop_soil, i, j, soil, dist,
             a_v, b_v, c_v, a_s, b_s, c_s, rho_n, eps):
    """Traverse edge (i, j): returns (velocity', drop_soil') and updates
    the edge soil in place (both orientations)."""
    s = float(soil[i, j])
    vel = vel + a_v / (b_v + c_v * (s * s))
    denom = vel
    if denom < eps:
        denom = eps
    t = float(dist[i, j]) / denom
    dsoil = a_s / (b_s + c_s * (t * t))
    ns = (1.0 - rho_n) * s - rho_n * dsoil
    soil[i, j] = ns
    soil[j, i] = ns
    return vel, drop_soil + dsoil


def iwd_global_update(soil, tour, soil_ib, rho_iwd):
    """Reinforce the iteration-best tour's edges with its drop's soil."""
    n = len(tour)
    scale = rho_iwd * (1.0 / (n - 1)) * soil_ib
    for k in range(n):
        a = int(tour[k])
        b = int(tour[k + 1]) if k + 1 < n else int(tour[0])
        ns = (1.0 + rho_iwd) * float(soil[a, b]) - scale
        soil[a, b] = ns
        soil[b, a] = ns


def iwd_step(dist, soil, tours, lengths, a_v, b_v, c_v, a_s, b_s, c_s,
             init_velocity, rho_n, rho_iwd, eps, stream):
    """Lockstep tour construction by m drops from distinct random starts,
    with per-move local soil updates, then iteration-best global update.
    Drop velocity and carried soil reset every iteration; edge soil and the
    caller-tracked best persist.
    """
    count, n = tours.shape
    idx = list(range(n))
    for i in range(count):
        j = i + stream.randbelow(n - i)
        idx[i], idx[j] = idx[j], idx[i]
    vels = [0.0] * count
    dsoils = [0.0] * count
    current = [0] * count
    visited = np.zeros((count, n), dtype=np.uint8)
    weights = np.empty(n)
    for a in range(count):
        s = idx[a]
        tours[a, 0] = s
        visited[a, s] = 1
        current[a] = s
        vels[a] = init_velocity
    for pos in range(1, n):
        for a in range(count):
            cur = current[a]
            vrow = visited[a]
            minsoil = 0.0
            first = True
            for j in range(n):
                if vrow[j]:
                    continue
                sv = float(soil[cur, j])
                if first or sv < minsoil:
                    minsoil = sv
                    first = False
            total = 0.0
            for j in range(n):
                if vrow[j]:
                    weights[j] = 0.0
                    continue
                sv = float(soil[cur, j])
                g = sv if minsoil >= 0.0 else sv - minsoil
                fval = 1.0 / (eps + g)
                weights[j] = fval
                total += fval
            u = stream.random()
            nxt = _roulette(weights, vrow, n, u, total)
            vels[a], dsoils[a] = iwd_move(
                vels[a], dsoils[a], cur, nxt, soil, dist,
                a_v, b_v, c_v, a_s, b_s, c_s, rho_n, eps)
            tours[a, pos] = nxt
            vrow[nxt] = 1
            current[a] = nxt
    for a in range(count):
        lengths[a] = tour_length(dist, tours[a])
    best = 0
    for a in range(1, count):
        if float(lengths[a]) < float(lengths[best]):
            best = a
    iwd_global_update(soil, tours[best], dsoils[best], rho_iwd)
