"""Regenerates the oracle fixtures in this directory.

    python3 generate_fixtures.py

LP optima come from scipy's HiGHS solver; circuit and enclosure references
are mpmath evaluations at 128 and 256 bits. Rationals are "num/den" strings;
mpmath values are written as their exact dyadic value.
"""

import json
import random
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
from scipy.optimize import linprog

HERE = Path(__file__).parent


def q(f):
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def mpf_exact(x):
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    return q((-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp))


def lp_cases(rng, count=100):
    cases = []
    while len(cases) < count:
        n = rng.randint(2, 10)
        x0 = [rng.randint(0, 5) for _ in range(n)]
        rows = []
        for _ in range(rng.randint(1, 8)):
            a = [rng.randint(-9, 9) for _ in range(n)]
            rows.append(("le", a, sum(ai * xi for ai, xi in zip(a, x0)) + rng.randint(0, 5)))
        for _ in range(rng.randint(0, 2)):
            a = [rng.randint(-9, 9) for _ in range(n)]
            rows.append(("eq", a, sum(ai * xi for ai, xi in zip(a, x0))))
        bounds = []
        for xi in x0:
            kind = rng.random()
            if kind < 0.7:
                bounds.append((0, 10))
            elif kind < 0.9:
                bounds.append((-5, 10))
            else:
                bounds.append((min(xi, 1), xi + rng.randint(0, 3)))
        c = [rng.randint(-9, 9) for _ in range(n)]
        a_ub = [r[1] for r in rows if r[0] == "le"]
        b_ub = [r[2] for r in rows if r[0] == "le"]
        a_eq = [r[1] for r in rows if r[0] == "eq"] or None
        b_eq = [r[2] for r in rows if r[0] == "eq"] or None
        res = linprog(
            -np.array(c, dtype=float),
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
        )
        if res.status != 0:
            continue
        cases.append(
            {
                "objective": c,
                "rows": [{"relation": r[0], "coeffs": r[1], "rhs": r[2]} for r in rows],
                "bounds": bounds,
                "optimum": -res.fun,
            }
        )
    return cases


def circuit_cases(rng, count=1000):
    mpmath.mp.prec = 128
    cases = []
    while len(cases) < count:
        k = rng.randint(2, 5)
        w = [rng.randint(1, 12) for _ in range(k)]
        lam = [Fraction(v, sum(w)) for v in w]
        xs = [Fraction(rng.randint(1, 1000), rng.randint(1, 100)) for _ in range(k)]
        t = mpmath.mpf(1)
        for x, l in zip(xs, lam):
            xl = mpmath.mpf(x.numerator) / x.denominator / (mpmath.mpf(l.numerator) / l.denominator)
            t *= xl ** (mpmath.mpf(l.numerator) / l.denominator)
        rel = mpmath.mpf(10) ** (-rng.uniform(1, 11.5)) * rng.choice([-1, 1])
        b = Fraction(mpf_exact(t * (1 + rel)))
        b = b.limit_denominator(10**18)
        margin = (t - mpmath.mpf(b.numerator) / b.denominator) / t
        if abs(margin) <= mpmath.mpf("1e-12"):
            continue
        cases.append(
            {
                "b": q(b),
                "entries": [[q(x), q(l)] for x, l in zip(xs, lam)],
                "holds": bool(margin >= 0),
            }
        )
    return cases


def rand_q(rng, lo, hi, den=1000):
    return Fraction(rng.randint(lo * den, hi * den), den)


def enclosure_cases(rng, count=1000, kinds=("exp", "log", "rpow", "entropy")):
    mpmath.mp.prec = 256
    cases = []
    while len(cases) < count:
        kind = kinds[len(cases) % len(kinds)]
        if kind == "exp":
            x = rand_q(rng, -60, 60, rng.choice([1, 7, 1000, 65536]))
            ref = mpmath.exp(mpmath.mpf(x.numerator) / x.denominator)
            cases.append({"kind": kind, "args": [q(x)], "value": mpf_exact(ref)})
        elif kind == "log":
            x = Fraction(rng.randint(1, 10**9), rng.randint(1, 10**9))
            if x == 1:
                continue
            ref = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
            cases.append({"kind": kind, "args": [q(x)], "value": mpf_exact(ref)})
        elif kind == "rpow":
            x = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**4))
            r = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            ref = mpmath.power(mpmath.mpf(x.numerator) / x.denominator, mpmath.mpf(r.numerator) / r.denominator)
            cases.append({"kind": kind, "args": [q(x), q(r)], "value": mpf_exact(ref)})
        else:
            k = rng.randint(1, 6)
            nu = [Fraction(rng.randint(0, 10**6), rng.randint(1, 10**4)) if rng.random() > 0.15 else Fraction(0) for _ in range(k)]
            c = [Fraction(rng.randint(1, 10**6), rng.randint(1, 10**4)) for _ in range(k)]
            ref = mpmath.mpf(0)
            for v, ci in zip(nu, c):
                if v == 0:
                    continue
                vm = mpmath.mpf(v.numerator) / v.denominator
                cm = mpmath.mpf(ci.numerator) / ci.denominator
                ref += vm * (mpmath.log(vm / cm) - 1)
            cases.append(
                {"kind": kind, "args": [[q(v) for v in nu], [q(ci) for ci in c]], "value": mpf_exact(ref)}
            )
    return cases


def main():
    rng = random.Random(20240611)
    (HERE / "lp_cases.json").write_text(json.dumps(lp_cases(rng)))
    (HERE / "circuit_cases.json").write_text(json.dumps(circuit_cases(rng)))
    (HERE / "enclosure_cases.json").write_text(json.dumps(enclosure_cases(rng)))
    (HERE / "entropy_cases.json").write_text(json.dumps(enclosure_cases(rng, kinds=("entropy",))))


if __name__ == "__main__":
    main()
