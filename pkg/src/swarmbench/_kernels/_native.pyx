# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled compute kernels.

Mirror of swarmbench._kernels.pyfallback, operation for operation and in
the same floating-point order, so both backends produce bit-identical
traces (the build uses -ffp-contract=off; no fast-math). Keep the two
files in lockstep when editing.
"""

import numpy as np

from libc.math cimport cos, exp, fabs, pow, sqrt
from libc.stdint cimport int64_t, uint8_t, uint64_t

OBJ_SPHERE = 0
OBJ_RASTRIGIN = 1
OBJ_ROSENBROCK = 2
OBJ_ACKLEY = 3

ETA_FLOOR = 1e-9

cdef double _TWO_PI = 6.283185307179586
cdef double _EULER = 2.718281828459045
cdef double _DOUBLE_SCALE = 1.0 / 9007199254740992.0  # 2**-53
cdef double _ETA_FLOOR = 1e-9


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef class RandomStream:
    """Deterministic xoshiro256** stream, splitmix64-seeded."""

    cdef uint64_t s0, s1, s2, s3
    cdef readonly object seed

    def __init__(self, seed):
        seed = int(seed)
        if seed < 0 or seed > 0xFFFFFFFFFFFFFFFF:
            raise ValueError("seed must fit in 64 unsigned bits")
        self.seed = seed
        cdef uint64_t x = <uint64_t> seed
        cdef uint64_t z
        cdef uint64_t state[4]
        cdef int i
        for i in range(4):
            x = x + <uint64_t> 0x9E3779B97F4A7C15
            z = x
            z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
            z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
            state[i] = z ^ (z >> 31)
        if state[0] == 0 and state[1] == 0 and state[2] == 0 and state[3] == 0:
            state[0] = 1  # xoshiro forbids the all-zero state
        self.s0 = state[0]
        self.s1 = state[1]
        self.s2 = state[2]
        self.s3 = state[3]

    cdef uint64_t _next_u64(self):
        cdef uint64_t s0 = self.s0
        cdef uint64_t s1 = self.s1
        cdef uint64_t s2 = self.s2
        cdef uint64_t s3 = self.s3
        cdef uint64_t result = _rotl(s1 * <uint64_t> 5, 7) * <uint64_t> 9
        cdef uint64_t t = s1 << 17
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s0 = s0
        self.s1 = s1
        self.s2 = s2
        self.s3 = s3
        return result

    cdef double _random(self):
        return <double> (self._next_u64() >> 11) * _DOUBLE_SCALE

    cdef double _uniform(self, double a, double b):
        return a + (b - a) * self._random()

    cdef uint64_t _randbelow(self, uint64_t n):
        return self._next_u64() % n

    def next_u64(self):
        return self._next_u64()

    def random(self):
        """Uniform double on [0, 1)."""
        return self._random()

    def uniform(self, double a, double b):
        return self._uniform(a, b)

    def randbelow(self, n):
        """Uniform integer in [0, n)."""
        return self._randbelow(<uint64_t> n)

    def state(self):
        return (self.s0, self.s1, self.s2, self.s3)


# ---------------------------------------------------------------------------
# objectives

cdef double _eval_ptr(int code, const double* x, Py_ssize_t n) except? -1.0:
    cdef double s, sq, cs, a, b, xi
    cdef Py_ssize_t d
    if code == 0:  # sphere
        s = 0.0
        for d in range(n):
            xi = x[d]
            s += xi * xi
        return s
    if code == 1:  # rastrigin
        s = 0.0
        for d in range(n):
            xi = x[d]
            s += xi * xi - 10.0 * cos(_TWO_PI * xi)
        return 10.0 * n + s
    if code == 2:  # rosenbrock
        s = 0.0
        for d in range(n - 1):
            a = x[d + 1] - x[d] * x[d]
            b = 1.0 - x[d]
            s += 100.0 * (a * a) + b * b
        return s
    if code == 3:  # ackley
        sq = 0.0
        cs = 0.0
        for d in range(n):
            xi = x[d]
            sq += xi * xi
            cs += cos(_TWO_PI * xi)
        return (-20.0 * exp(-0.2 * sqrt(sq / n))
                - exp(cs / n) + 20.0 + _EULER)
    raise ValueError(f"unknown objective code {code!r}")


def eval_objective(int code, double[::1] x):
    return _eval_ptr(code, &x[0], x.shape[0])


def init_positions(Py_ssize_t count, double[::1] lower, double[::1] upper,
                   RandomStream stream):
    cdef Py_ssize_t dim = lower.shape[0]
    out_arr = np.empty((count, dim))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, d
    for i in range(count):
        for d in range(dim):
            out[i, d] = stream._uniform(lower[d], upper[d])
    return out_arr


# ---------------------------------------------------------------------------
# PSO

def pso_step(int code, double[:, ::1] x, double[:, ::1] v, double[::1] values,
             double[:, ::1] pbest, double[::1] pbest_values,
             double[::1] gbest, double gbest_value,
             double[::1] lower, double[::1] upper, double[::1] vmax,
             double w, double c1, double c2, RandomStream stream):
    cdef Py_ssize_t count = x.shape[0]
    cdef Py_ssize_t dim = x.shape[1]
    cdef Py_ssize_t i, d
    cdef double r1, r2, xi, vel, vm, lo, hi, f
    for i in range(count):
        for d in range(dim):
            r1 = stream._random()
            r2 = stream._random()
            xi = x[i, d]
            vel = (w * v[i, d]
                   + c1 * r1 * (pbest[i, d] - xi)
                   + c2 * r2 * (gbest[d] - xi))
            vm = vmax[d]
            if vel > vm:
                vel = vm
            elif vel < -vm:
                vel = -vm
            xi = xi + vel
            lo = lower[d]
            hi = upper[d]
            if xi < lo:
                xi = lo
                vel = 0.0
            elif xi > hi:
                xi = hi
                vel = 0.0
            x[i, d] = xi
            v[i, d] = vel
        f = _eval_ptr(code, &x[i, 0], dim)
        values[i] = f
        if f < pbest_values[i]:
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

cdef inline double _abc_fitness(double f) nogil:
    if f >= 0.0:
        return 1.0 / (1.0 + f)
    return 1.0 + fabs(f)


def abc_fitness(double f):
    return _abc_fitness(f)


def abc_onlooker_probs(double[::1] fitness):
    cdef Py_ssize_t n = fitness.shape[0]
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        total += fitness[i]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    for i in range(n):
        out[i] = fitness[i] / total
    return out_arr


cdef void _abc_neighbor_move(int code, double[:, ::1] xs, double[::1] f,
                             int64_t[::1] trials, double[::1] lower,
                             double[::1] upper, RandomStream stream,
                             Py_ssize_t i) except *:
    cdef Py_ssize_t count = xs.shape[0]
    cdef Py_ssize_t dim = xs.shape[1]
    cdef Py_ssize_t k = <Py_ssize_t> stream._randbelow(<uint64_t> (count - 1))
    if k >= i:
        k += 1
    cdef Py_ssize_t j = <Py_ssize_t> stream._randbelow(<uint64_t> dim)
    cdef double phi = stream._uniform(-1.0, 1.0)
    cdef double old = xs[i, j]
    cdef double val = old + phi * (old - xs[k, j])
    cdef double lo = lower[j]
    cdef double hi = upper[j]
    if val < lo:
        val = lo
    elif val > hi:
        val = hi
    xs[i, j] = val
    cdef double cand = _eval_ptr(code, &xs[i, 0], dim)
    if cand < f[i]:
        f[i] = cand
        trials[i] = 0
    else:
        xs[i, j] = old
        trials[i] = trials[i] + 1


def abc_step(int code, double[:, ::1] xs, double[::1] f, int64_t[::1] trials,
             double[::1] lower, double[::1] upper, long long limit,
             RandomStream stream):
    cdef Py_ssize_t count = xs.shape[0]
    cdef Py_ssize_t dim = xs.shape[1]
    cdef Py_ssize_t i, d, chosen
    cdef double fit, total, u, threshold, acc
    for i in range(count):
        _abc_neighbor_move(code, xs, f, trials, lower, upper, stream, i)
    fits_arr = np.empty(count)
    cdef double[::1] fits = fits_arr
    total = 0.0
    for i in range(count):
        fit = _abc_fitness(f[i])
        fits[i] = fit
        total += fit
    for d in range(count):
        u = stream._random()
        threshold = u * total
        acc = 0.0
        chosen = count - 1
        for i in range(count):
            acc += fits[i]
            if threshold < acc:
                chosen = i
                break
        _abc_neighbor_move(code, xs, f, trials, lower, upper, stream, chosen)
    cdef Py_ssize_t worst = 0
    for i in range(1, count):
        if trials[i] > trials[worst]:
            worst = i
    if trials[worst] > limit:
        for d in range(dim):
            xs[worst, d] = stream._uniform(lower[d], upper[d])
        f[worst] = _eval_ptr(code, &xs[worst, 0], dim)
        trials[worst] = 0


# ---------------------------------------------------------------------------
# FA

def fa_attractiveness(double r, double beta0, double gamma):
    return beta0 * exp(-gamma * (r * r))


def fa_step(int code, double[:, ::1] x, double[::1] f, double[::1] lower,
            double[::1] upper, double beta0, double gamma, double alpha_t,
            RandomStream stream):
    cdef Py_ssize_t count = x.shape[0]
    cdef Py_ssize_t dim = x.shape[1]
    cdef Py_ssize_t best = 0
    cdef Py_ssize_t i, j, d
    cdef double fi, s, diff, r, beta, u, xi, lo, hi
    for i in range(1, count):
        if f[i] < f[best]:
            best = i
    for i in range(count):
        if i == best:
            for d in range(dim):
                u = stream._random()
                lo = lower[d]
                hi = upper[d]
                xi = x[i, d] + alpha_t * (u - 0.5) * (hi - lo)
                if xi < lo:
                    xi = lo
                elif xi > hi:
                    xi = hi
                x[i, d] = xi
            continue
        fi = f[i]
        for j in range(count):
            if f[j] < fi:
                s = 0.0
                for d in range(dim):
                    diff = x[i, d] - x[j, d]
                    s += diff * diff
                r = sqrt(s)
                beta = beta0 * exp(-gamma * (r * r))
                for d in range(dim):
                    u = stream._random()
                    lo = lower[d]
                    hi = upper[d]
                    xi = (x[i, d]
                          + beta * (x[j, d] - x[i, d])
                          + alpha_t * (u - 0.5) * (hi - lo))
                    if xi < lo:
                        xi = lo
                    elif xi > hi:
                        xi = hi
                    x[i, d] = xi
    for i in range(count):
        f[i] = _eval_ptr(code, &x[i, 0], dim)


# ---------------------------------------------------------------------------
# tours

cdef double _tour_length(double[:, ::1] dist, int64_t[::1] tour):
    cdef Py_ssize_t n = tour.shape[0]
    cdef double total = 0.0
    cdef Py_ssize_t k, a, b
    for k in range(n):
        a = <Py_ssize_t> tour[k]
        b = <Py_ssize_t> tour[k + 1] if k + 1 < n else <Py_ssize_t> tour[0]
        total += dist[a, b]
    return total


def tour_length(double[:, ::1] dist, int64_t[::1] tour):
    return _tour_length(dist, tour)


def random_tours(Py_ssize_t n, int64_t[:, ::1] tours, RandomStream stream):
    cdef Py_ssize_t count = tours.shape[0]
    cdef Py_ssize_t a, k, i, j
    cdef int64_t t
    for a in range(count):
        for k in range(n):
            tours[a, k] = k
        for i in range(n - 1):
            j = i + <Py_ssize_t> stream._randbelow(<uint64_t> (n - i))
            t = tours[a, i]
            tours[a, i] = tours[a, j]
            tours[a, j] = t


# ---------------------------------------------------------------------------
# ACO (Ant System)

cdef inline double _aco_edge_weight(double tau_ij, double dist_ij,
                                    double alpha, double beta) nogil:
    cdef double d = dist_ij
    cdef double eta
    if d < _ETA_FLOOR:
        d = _ETA_FLOOR
    eta = 1.0 / d
    return pow(tau_ij, alpha) * pow(eta, beta)


def aco_transition_probs(Py_ssize_t current, uint8_t[::1] visited,
                         double[:, ::1] tau, double[:, ::1] dist,
                         double alpha, double beta):
    cdef Py_ssize_t n = tau.shape[0]
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef double total = 0.0
    cdef double w
    cdef Py_ssize_t j
    for j in range(n):
        if visited[j]:
            continue
        w = _aco_edge_weight(tau[current, j], dist[current, j], alpha, beta)
        out[j] = w
        total += w
    for j in range(n):
        if not visited[j]:
            out[j] = out[j] / total
    return out_arr


cdef Py_ssize_t _roulette(double[::1] weights, uint8_t[::1] visited,
                          Py_ssize_t n, double u, double total):
    cdef double threshold = u * total
    cdef double acc = 0.0
    cdef Py_ssize_t last = -1
    cdef Py_ssize_t j
    for j in range(n):
        if visited[j]:
            continue
        last = j
        acc += weights[j]
        if threshold < acc:
            return j
    return last  # absorbs rounding residue


cdef void _aco_construct(Py_ssize_t start, double[:, ::1] tau,
                         double[:, ::1] dist, double alpha, double beta,
                         RandomStream stream, int64_t[::1] tour_out,
                         uint8_t[::1] visited, double[::1] weights):
    cdef Py_ssize_t n = tau.shape[0]
    cdef Py_ssize_t pos, j, nxt, current
    cdef double total, w, u
    for j in range(n):
        visited[j] = 0
    tour_out[0] = start
    visited[start] = 1
    current = start
    for pos in range(1, n):
        total = 0.0
        for j in range(n):
            if visited[j]:
                weights[j] = 0.0
                continue
            w = _aco_edge_weight(tau[current, j], dist[current, j],
                                 alpha, beta)
            weights[j] = w
            total += w
        u = stream._random()
        nxt = _roulette(weights, visited, n, u, total)
        tour_out[pos] = nxt
        visited[nxt] = 1
        current = nxt


def aco_construct_tour(Py_ssize_t start, double[:, ::1] tau,
                       double[:, ::1] dist, double alpha, double beta,
                       RandomStream stream, int64_t[::1] tour_out):
    cdef Py_ssize_t n = tau.shape[0]
    visited_arr = np.zeros(n, dtype=np.uint8)
    weights_arr = np.empty(n)
    _aco_construct(start, tau, dist, alpha, beta, stream, tour_out,
                   visited_arr, weights_arr)


def aco_pheromone_update(double[:, ::1] tau, int64_t[:, ::1] tours,
                         double[::1] lengths, double rho, double q,
                         double tau_min):
    cdef Py_ssize_t n = tau.shape[0]
    cdef Py_ssize_t count = tours.shape[0]
    cdef Py_ssize_t i, j, a, k, u, v
    cdef double val, deposit
    for a in range(count):
        if not lengths[a] > 0.0:
            raise ValueError(f"tour length must be positive, got {lengths[a]}")
    for i in range(n):
        for j in range(i + 1, n):
            val = (1.0 - rho) * tau[i, j]
            tau[i, j] = val
            tau[j, i] = val
    for a in range(count):
        deposit = q / lengths[a]
        for k in range(n):
            u = <Py_ssize_t> tours[a, k]
            v = <Py_ssize_t> tours[a, k + 1] if k + 1 < n else <Py_ssize_t> tours[a, 0]
            tau[u, v] = tau[u, v] + deposit
            tau[v, u] = tau[v, u] + deposit
    for i in range(n):
        for j in range(i + 1, n):
            if tau[i, j] < tau_min:
                tau[i, j] = tau_min
                tau[j, i] = tau_min


def aco_step(double[:, ::1] dist, double[:, ::1] tau, int64_t[:, ::1] tours,
             double[::1] lengths, double alpha, double beta, double rho,
             double q, double tau_min, RandomStream stream):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t count = tours.shape[0]
    cdef Py_ssize_t a, start
    visited_arr = np.zeros(n, dtype=np.uint8)
    weights_arr = np.empty(n)
    cdef uint8_t[::1] visited = visited_arr
    cdef double[::1] weights = weights_arr
    for a in range(count):
        start = <Py_ssize_t> stream._randbelow(<uint64_t> n)
        _aco_construct(start, tau, dist, alpha, beta, stream,
                       tours[a], visited, weights)
        lengths[a] = _tour_length(dist, tours[a])
    aco_pheromone_update(tau, tours, lengths, rho, q, tau_min)


# ---------------------------------------------------------------------------
# IWD

def iwd_edge_probs(Py_ssize_t current, uint8_t[::1] visited,
                   double[:, ::1] soil, double eps):
    cdef Py_ssize_t n = soil.shape[0]
    cdef double minsoil = 0.0
    cdef bint first = True
    cdef double s, g, fval, total
    cdef Py_ssize_t j
    for j in range(n):
        if visited[j]:
            continue
        s = soil[current, j]
        if first or s < minsoil:
            minsoil = s
            first = False
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    total = 0.0
    for j in range(n):
        if visited[j]:
            continue
        s = soil[current, j]
        g = s if minsoil >= 0.0 else s - minsoil
        fval = 1.0 / (eps + g)
        out[j] = fval
        total += fval
    for j in range(n):
        if not visited[j]:
            out[j] = out[j] / total
    return out_arr


cdef void _iwd_move(double* vel, double* carried, Py_ssize_t i, Py_ssize_t j,
                    double[:, ::1] soil, double[:, ::1] dist,
                    double a_v, double b_v, double c_v,
                    double a_s, double b_s, double c_s,
                    double rho_n, double eps):
    cdef double s = soil[i, j]
    vel[0] = vel[0] + a_v / (b_v + c_v * (s * s))
    cdef double denom = vel[0]
    if denom < eps:
        denom = eps
    cdef double t = dist[i, j] / denom
    cdef double dsoil = a_s / (b_s + c_s * (t * t))
    cdef double ns = (1.0 - rho_n) * s - rho_n * dsoil
    soil[i, j] = ns
    soil[j, i] = ns
    carried[0] = carried[0] + dsoil


def iwd_move(double vel, double drop_soil, Py_ssize_t i, Py_ssize_t j,
             double[:, ::1] soil, double[:, ::1] dist,
             double a_v, double b_v, double c_v,
             double a_s, double b_s, double c_s, double rho_n, double eps):
    _iwd_move(&vel, &drop_soil, i, j, soil, dist,
              a_v, b_v, c_v, a_s, b_s, c_s, rho_n, eps)
    return vel, drop_soil


cdef void _iwd_global(double[:, ::1] soil, int64_t[::1] tour, double soil_ib,
                      double rho_iwd):
    cdef Py_ssize_t n = tour.shape[0]
    cdef double scale = rho_iwd * (1.0 / (n - 1)) * soil_ib
    cdef Py_ssize_t k, a, b
    cdef double ns
    for k in range(n):
        a = <Py_ssize_t> tour[k]
        b = <Py_ssize_t> tour[k + 1] if k + 1 < n else <Py_ssize_t> tour[0]
        ns = (1.0 + rho_iwd) * soil[a, b] - scale
        soil[a, b] = ns
        soil[b, a] = ns


def iwd_global_update(double[:, ::1] soil, int64_t[::1] tour, double soil_ib,
                      double rho_iwd):
    _iwd_global(soil, tour, soil_ib, rho_iwd)


def iwd_step(double[:, ::1] dist, double[:, ::1] soil, int64_t[:, ::1] tours,
             double[::1] lengths, double a_v, double b_v, double c_v,
             double a_s, double b_s, double c_s, double init_velocity,
             double rho_n, double rho_iwd, double eps, RandomStream stream):
    cdef Py_ssize_t count = tours.shape[0]
    cdef Py_ssize_t n = tours.shape[1]
    cdef Py_ssize_t i, j, a, pos, cur, nxt, best, tmp
    cdef double sv, minsoil, g, fval, total, u
    cdef bint first

    idx_arr = np.empty(n, dtype=np.int64)
    vels_arr = np.empty(count)
    dsoils_arr = np.zeros(count)
    current_arr = np.empty(count, dtype=np.int64)
    visited_arr = np.zeros((count, n), dtype=np.uint8)
    weights_arr = np.empty(n)
    cdef int64_t[::1] idx = idx_arr
    cdef double[::1] vels = vels_arr
    cdef double[::1] dsoils = dsoils_arr
    cdef int64_t[::1] current = current_arr
    cdef uint8_t[:, ::1] visited = visited_arr
    cdef double[::1] weights = weights_arr

    for i in range(n):
        idx[i] = i
    for i in range(count):
        j = i + <Py_ssize_t> stream._randbelow(<uint64_t> (n - i))
        tmp = <Py_ssize_t> idx[i]
        idx[i] = idx[j]
        idx[j] = tmp
    for a in range(count):
        cur = <Py_ssize_t> idx[a]
        tours[a, 0] = cur
        visited[a, cur] = 1
        current[a] = cur
        vels[a] = init_velocity
        dsoils[a] = 0.0
    for pos in range(1, n):
        for a in range(count):
            cur = <Py_ssize_t> current[a]
            minsoil = 0.0
            first = True
            for j in range(n):
                if visited[a, j]:
                    continue
                sv = soil[cur, j]
                if first or sv < minsoil:
                    minsoil = sv
                    first = False
            total = 0.0
            for j in range(n):
                if visited[a, j]:
                    weights[j] = 0.0
                    continue
                sv = soil[cur, j]
                g = sv if minsoil >= 0.0 else sv - minsoil
                fval = 1.0 / (eps + g)
                weights[j] = fval
                total += fval
            u = stream._random()
            nxt = _roulette(weights, visited[a], n, u, total)
            _iwd_move(&vels[a], &dsoils[a], cur, nxt, soil, dist,
                      a_v, b_v, c_v, a_s, b_s, c_s, rho_n, eps)
            tours[a, pos] = nxt
            visited[a, nxt] = 1
            current[a] = nxt
    for a in range(count):
        lengths[a] = _tour_length(dist, tours[a])
    best = 0
    for a in range(1, count):
        if lengths[a] < lengths[best]:
            best = a
    _iwd_global(soil, tours[best], dsoils[best], rho_iwd)
