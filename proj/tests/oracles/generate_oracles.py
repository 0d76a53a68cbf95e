"""Independent reference values for the unit tests (scipy / numpy).

Run with python3; paste the printed literals into the matching tests. The
GARCH series is read from a file produced by simulate_argarch(
{0.05, 0.4, 0.2, 0.1, 0.8}, 600, seed 11).
"""
import sys

import numpy as np
from scipy import integrate, optimize, stats


def p(name, v):
    print(f"{name} = {v!r}")


# Normal distribution.
for q in [1e-300, 1e-20, 1e-10, 1e-5, 0.001, 0.025, 0.1, 0.3, 0.5, 0.7, 0.975, 0.999, 1 - 1e-12]:
    p(f"ppf({q!r})", float(stats.norm.ppf(q)))
for x in [-38.0, -8.0, -3.0, -1.0, 0.0, 0.5, 2.0, 6.0]:
    p(f"cdf({x})", float(stats.norm.cdf(x)))

# CRPS of a fixed ensemble by integrating (F(x) - 1{x >= y})^2.
members = np.array([1.3, -0.2, 0.7, 2.5, 0.1])
y = 0.4


def crps_integral(ens, obs):
    ens = np.sort(ens)
    knots = np.unique(np.concatenate([ens, [obs]]))
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        mid = 0.5 * (a + b)
        f = np.mean(ens <= mid)
        h = 1.0 if mid >= obs else 0.0
        total += (f - h) ** 2 * (b - a)
    return total


p("crps_fixed", crps_integral(members, y))
p("crps_fixed_quad", integrate.quad(lambda x: (np.mean(members <= x) - (x >= y)) ** 2, -5, 6,
                                    points=list(members) + [y], limit=200)[0])

# Energy score of a 4 x 3 ensemble.
X = np.array([[0.5, 1.0, -0.3], [1.5, 0.2, 0.4], [-0.7, 0.9, 1.1], [0.0, -1.2, 0.8]])
obs = np.array([0.2, 0.3, 0.1])
t1 = np.mean(np.linalg.norm(X - obs, axis=1))
t2 = np.mean([np.linalg.norm(a - b) for a in X for b in X]) / 2.0
p("es_fixed", t1 - t2)

# Diebold-Mariano on fixed score series.
s1 = np.array([1.2, 0.9, 1.4, 1.1, 1.3, 0.8, 1.6, 1.0, 1.25, 1.05])
s2 = np.array([1.0, 1.0, 1.1, 0.9, 1.2, 0.85, 1.2, 0.95, 1.1, 1.0])
d = s1 - s2
stat = d.mean() / (d.std(ddof=1) / np.sqrt(len(d)))
p("dm_stat", stat)
p("dm_p", 2 * stats.norm.sf(abs(stat)))

# Spearman correlation with ties (average ranks) and its Pearson mapping.
H = np.array([[0.1, 0.5, 0.9], [0.2, 0.5, 0.3], [0.7, 0.1, 0.4], [0.4, 0.8, 0.8], [0.9, 0.3, 0.2]])
rho = stats.spearmanr(H).statistic
p("spearman", rho.tolist())
p("pearson_map", (2 * np.sin(np.pi * rho / 6)).tolist())

# Ordinal ranks (ties by order of appearance).
p("ordinal", stats.rankdata([0.3, 0.1, 0.3, 0.2, 0.1], method="ordinal").tolist())

# Chi-square critical values.
p("chi2_99_9", float(stats.chi2.ppf(0.99, 9)))
p("chi2_99_90", float(stats.chi2.ppf(0.99, 90)))

# SARIMA(1,0,0)(1,0,0,7) conditional least squares on a closed-form series.
n, s = 80, 7
t = np.arange(n)
x = np.sin(0.9 * t) + 0.6 * np.sin(2 * np.pi * t / 7 + 0.3) + 0.3 * np.cos(2.3 * t) + 0.01 * t


def sarima_resid(theta):
    c, phi, sphi = theta
    tt = np.arange(s + 1, n)
    return x[tt] - (c + phi * x[tt - 1] + sphi * x[tt - s] - phi * sphi * x[tt - s - 1])


sol = optimize.least_squares(sarima_resid, [0.0, 0.1, 0.1], xtol=1e-15, ftol=1e-15, gtol=1e-15)
p("sarima_css", sol.x.tolist())
p("sarima_sigma", float(np.sqrt(np.mean(sarima_resid(sol.x) ** 2))))

# AR(1)-GARCH(1,1) Gaussian log-likelihood (constants dropped): the mean
# starts at c / (1 - phi), the variance at the sample variance (ddof=1).
if len(sys.argv) > 1:
    g = np.loadtxt(sys.argv[1])

    def nll(c, phi, omega, alpha, beta, data):
        a = data[0] - c / (1 - phi)
        s2 = np.var(data, ddof=1)
        tot = np.log(s2) + a * a / s2
        for i in range(1, len(data)):
            s2 = omega + alpha * a * a + beta * s2
            a = data[i] - c - phi * data[i - 1]
            tot += np.log(s2) + a * a / s2
        return 0.5 * tot

    p("garch_ll_true", -nll(0.05, 0.4, 0.2, 0.1, 0.8, g))

    def obj(th):
        c, phi, om, al, be = th
        if abs(phi) >= 1 or om <= 0 or al < 0 or be < 0 or al + be >= 1:
            return 1e10
        return nll(c, phi, om, al, be, g)

    best = None
    # The surface has a ridge with separate local optima; use a grid of starts.
    starts = [[c0, p0, om0, a0, b0] for c0 in (0.0,) for p0 in (0.2, 0.4) for om0 in (0.05, 0.3, 1.0)
              for a0 in (0.02, 0.1) for b0 in (0.5, 0.8, 0.95) if a0 + b0 < 1]
    for start in starts:
        r = optimize.minimize(obj, start, method="Nelder-Mead",
                              options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 40000, "maxfev": 80000})
        r = optimize.minimize(obj, r.x, method="Powell", options={"xtol": 1e-10, "ftol": 1e-14})
        if best is None or r.fun < best.fun:
            best = r
    p("garch_mle", best.x.tolist())
    p("garch_ll_max", -best.fun)
