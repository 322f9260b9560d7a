"""Published reference values used by ``egdss repro``.

Simulation rows are ``(n, m): (mean_l1, bias_l1, mse_l1, mean_l2, bias_l2, mse_l2)``.
"""
from __future__ import annotations

TRUE_R = {(0.5, 1.5): 0.8391, (1.0, 1.5): 0.6405, (1.0, 0.5): 0.2551}

SIZES = ((10, 10), (15, 15), (25, 25), (30, 30), (50, 50), (75, 75))

SIMULATION_TABLES = {
    1: {
        "lam1": 0.5,
        "lam2": 1.5,
        "rows": {
            (10, 10): (0.52881, 0.02881, 0.01272, 1.62901, 0.12901, 0.19516),
            (15, 15): (0.51921, 0.019208, 0.00808, 1.58803, 0.08803, 0.11591),
            (25, 25): (0.51427, 0.01427, 0.00453, 1.54604, 0.04604, 0.05462),
            (30, 30): (0.50998, 0.00998, 0.00389, 1.53623, 0.03623, 0.04227),
            (50, 50): (0.50531, 0.00531, 0.00221, 1.53003, 0.03003, 0.02474),
            (75, 75): (0.50529, 0.00529, 0.00150, 1.51549, 0.01549, 0.01516),
        },
        "ci": {
            (10, 10): (0.00714, 1.67700),
            (15, 15): (-0.16250, 1.84527),
            (25, 25): (0.29010, 1.38693),
            (30, 30): (0.08218, 1.59616),
            (50, 50): (0.41299, 1.26788),
            (75, 75): (0.42865, 1.24868),
        },
    },
    2: {
        "lam1": 1.0,
        "lam2": 1.5,
        "rows": {
            (10, 10): (1.07005, 0.07005, 0.07308, 1.62033, 0.12033, 0.17647),
            (15, 15): (1.03367, 0.03367, 0.03485, 1.58321, 0.08321, 0.11195),
            (25, 25): (1.02501, 0.02501, 0.02182, 1.56419, 0.06418, 0.06247),
            (30, 30): (1.01862, 0.01862, 0.01575, 1.54095, 0.04095, 0.04532),
            (50, 50): (1.01643, 0.01643, 0.01089, 1.53552, 0.03552, 0.02541),
            (75, 75): (1.01383, 0.01383, 0.00614, 1.52276, 0.02276, 0.01679),
        },
        "ci": {
            (10, 10): (-0.95120, 2.23538),
            (15, 15): (-0.30554, 1.59834),
            (25, 25): (-0.36708, 1.65794),
            (30, 30): (-0.05805, 1.34368),
            (50, 50): (0.18678, 1.09807),
            (75, 75): (0.17796, 1.10334),
        },
    },
    3: {
        "lam1": 1.0,
        "lam2": 0.5,
        "rows": {
            (10, 10): (1.07666, 0.07666, 0.07914, 0.52771, 0.02771, 0.01282),
            (15, 15): (1.03821, 0.03821, 0.03830, 0.51733, 0.01753, 0.00846),
            (25, 25): (1.02654, 0.02654, 0.02262, 0.51750, 0.01750, 0.00496),
            (30, 30): (1.02066, 0.02066, 0.01738, 0.50841, 0.00841, 0.00363),
            (50, 50): (1.01033, 0.01033, 0.00939, 0.50595, 0.00595, 0.00217),
            (75, 75): (1.01027, 0.01027, 0.00697, 0.50472, 0.00472, 0.00132),
        },
        "ci": {
            (10, 10): (-0.10393, 0.60624),
            (15, 15): (-0.12139, 0.63169),
            (25, 25): (-0.11027, 0.62711),
            (30, 30): (-0.02649, 0.53561),
            (50, 50): (0.07393, 0.43790),
            (75, 75): (0.09505, 0.41531),
        },
    },
}

# Goodness of fit on the jute fibre data: rate estimate, CvM (p), KS (p)
GOF_TABLE = {
    "jute10": {"lam_hat": 0.008149069, "cvm": 0.13151, "cvm_p": 0.4533, "ks": 0.1393, "ks_p": 0.5584},
    "jute20": {"lam_hat": 0.008725855, "cvm": 0.41935, "cvm_p": 0.06361, "ks": 0.20661, "ks_p": 0.1336},
}

RELIABILITY = {"r_hat": 0.5319, "ci_low": 0.3936, "ci_high": 0.6702}
