"""Fit the log-linear neutronics proxy coefficients to the reported design anchors.

Each QoI is modelled as  Q = Q_nom * exp(sum_j beta_j * (z_j - z_nom_j))  where z is the
unit-cube image of the design. Coefficients are fitted by bounded linear least squares in
log space; the bounds pin the coefficient signs the correlation structure fixes.

Run:  python3 tools/fit_proxy.py  > tools/fit_report.txt
"""
import numpy as np
from scipy.optimize import lsq_linear

NAMES = ["x_ca", "x_b10", "x_fh", "x_pp", "x_e", "x_cr", "x_mr"]
K = 1.68576

# (x_ca, x_b10, x_fh, x_pp, x_e, x_cr, x_mr), (lifetime, sdm, f_dh, q_max)
NOMINAL = ((90, 0.95, 160, 2.3, 0.197, 1.0, 0.825), (6.99, -6725, 1.469, 0.0188))
DESIGNS = [
    ("scenario-1 solution 1", (86.0, 0.20, 190, 1.94, 0.199, 0.97, 0.743), (14.03, -4830, 1.333, 0.0174)),
    ("scenario-1 solution 2", (35, 0.778, 190, 2.31, 0.199, 1.01, 0.716), (4.97, -6805, 1.317, 0.0170)),
    ("scenario-1 single-obj", (91, 0.53, 190, 2.20, 0.199, 1.10, 0.75), (11.41, -6708, 1.41, 0.016)),
    ("scenario-2 solution 1", (106.7, 0.777, 178.2, 1.94, 0.186, 0.97, 0.80), (10.72, -7338, 1.455, 0.0188)),
    ("scenario-2 solution 2", (56.6, 0.504, 190, 2.14, 0.199, 1.07, 0.742), (9.00, -5659, 1.37, 0.0164)),
    ("scenario-2 single-obj", (96.0, 0.615, 148.36, 1.94, 0.199, 0.97, 0.689), (9.61, -7952, 1.373, 0.0214)),
    ("scenario-3 solution 1", (100.82, 0.20, 172, 1.94, 0.197, 0.908, 0.733), (6.58, -7956, 1.387, 0.0192)),
    ("scenario-3 solution 2", (35, 0.20, 190, 2.61, 0.199, 0.948, 0.702), (4.42, -6277, 1.365, 0.0182)),
    ("scenario-3 single-obj", (98, 0.95, 158, 2.78, 0.197, 1.063, 0.522), (11.42, -6557, 1.455, 0.0182)),
]


def unit(d):
    ca, b10, fh, pp, e, cr, mr = d
    lo_cr, hi_cr = pp / 4, pp / 2
    lo_mr, hi_mr = (pp - 0.19) / 5, (pp - 0.19) / 2
    return np.array([
        (ca - 35) / 145, (b10 - 0.20) / 0.75, (fh - 130) / 60, (pp - 1.94) / 0.84,
        (e - 0.17) / 0.03, (cr - lo_cr) / (hi_cr - lo_cr), (mr - lo_mr) / (hi_mr - lo_mr),
    ])


def q_avg(d):
    return K / (d[5] * d[2])


INF = np.inf
# Per-QoI (lower, upper) coefficient bounds, in NAMES order.
BOUNDS = {
    # lifetime grows with compact radius
    "lifetime": ([-INF, -INF, -INF, -INF, 0, 0, -INF], [INF] * 7),
    "sdm_magnitude": ([-INF] * 7, [INF] * 7),
    # peaking grows with coating angle, pitch and moderator radius
    "f_dh": ([0, -INF, -INF, 0, -INF, -INF, 0], [INF] * 7),
    # local peaking (q_max / q_avg) falls with pitch and moderator radius
    "peaking": ([-INF] * 7, [INF, INF, INF, 0, INF, INF, 0]),
}


def targets(design, qoi):
    life, sdm, fdh, qmax = qoi
    return {
        "lifetime": life,
        "sdm_magnitude": abs(sdm),
        "f_dh": fdh,
        "peaking": qmax / q_avg(design),
    }


def main():
    z_nom = unit(NOMINAL[0])
    nom = targets(*NOMINAL)
    dz = np.array([unit(d) - z_nom for _, d, _ in DESIGNS])
    print("# log-linear proxy fit over", len(DESIGNS), "non-nominal anchors")
    print("# columns:", " ".join(NAMES))
    betas = {}
    for qoi in ["lifetime", "sdm_magnitude", "f_dh", "peaking"]:
        y = np.array([np.log(targets(d, q)[qoi] / nom[qoi]) for _, d, q in DESIGNS])
        lo, hi = BOUNDS[qoi]
        res = lsq_linear(dz, y, bounds=(lo, hi), method="bvls")
        betas[qoi] = res.x
        print(f"\n[{qoi}] anchor = {nom[qoi]!r}")
        print("beta = [" + ", ".join(f"{b:.6f}" for b in res.x) + "]")
        for (name, d, q), row in zip(DESIGNS, dz):
            truth = targets(d, q)[qoi]
            pred = nom[qoi] * np.exp(row @ res.x)
            print(f"  {name:24s} true {truth:10.5f} pred {pred:10.5f} rel {pred / truth - 1:+.4f}")
    print("\n# q_max relative errors (q_avg formula x peaking)")
    worst = 0.0
    for (name, d, q), row in zip(DESIGNS, dz):
        pred = q_avg(d) * max(1.0, nom["peaking"] * np.exp(row @ betas["peaking"]))
        rel = pred / q[3] - 1
        worst = max(worst, abs(rel))
        print(f"  {name:24s} true {q[3]:.5f} pred {pred:.5f} rel {rel:+.4f}")
    print(f"  worst {worst:.4f}")


if __name__ == "__main__":
    main()
