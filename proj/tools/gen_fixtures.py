#!/usr/bin/env python3
"""Generate STO-3G molecular-integral fixtures (FCIDUMP format).

Computes Gaussian integrals (McMurchie-Davidson), runs RHF, transforms to the
MO basis and writes FCIDUMP files plus sidecar metadata for the fixture sets
used by the test and acceptance suites:

  fixtures/h2_sto3g/    H-H bond scan
  fixtures/lih_sto3g/   Li-H bond scan
  fixtures/h2o_sto3g/   (R, angle) grid

Usage: python3 tools/gen_fixtures.py [outdir]
"""

import math
import os
import sys

import numpy as np
from scipy.linalg import eigh
from scipy.special import hyp1f1

ANGSTROM = 1.0 / 0.529177210903

# STO-3G: universal contraction coefficients, element-specific exponents.
S_COEF = [0.15432897, 0.53532814, 0.44463454]
SP_S_COEF = [-0.09996723, 0.39951283, 0.70011547]
SP_P_COEF = [0.15591627, 0.60768372, 0.39195739]

BASIS = {
    "H": [("S", [3.42525091, 0.62391373, 0.16885540], S_COEF)],
    "Li": [
        ("S", [16.1195750, 2.9362007, 0.7946505], S_COEF),
        ("SP", [0.6362897, 0.1478601, 0.0480887], None),
    ],
    "O": [
        ("S", [130.7093200, 23.8088610, 6.4436083], S_COEF),
        ("SP", [5.0331513, 1.1695961, 0.3803890], None),
    ],
}

CHARGE = {"H": 1, "Li": 3, "O": 8}


def boys(n, t):
    return hyp1f1(n + 0.5, n + 1.5, -t) / (2.0 * n + 1.0)


class Primitive:
    __slots__ = ("alpha", "coef", "center", "lmn")

    def __init__(self, alpha, coef, center, lmn):
        self.alpha = alpha
        self.coef = coef
        self.center = np.asarray(center, float)
        self.lmn = lmn


def norm_prim(alpha, lmn):
    l, m, n = lmn
    df = lambda k: math.prod(range(k, 0, -2)) if k > 0 else 1
    num = (2 * alpha / math.pi) ** 0.75 * (4 * alpha) ** ((l + m + n) / 2.0)
    den = math.sqrt(df(2 * l - 1) * df(2 * m - 1) * df(2 * n - 1))
    return num / den


def build_shells(atoms):
    """Return list of contracted basis functions (list of Primitive)."""
    funcs = []
    for sym, center in atoms:
        for kind, exps, coefs in BASIS[sym]:
            if kind == "S":
                funcs.append([Primitive(a, c, center, (0, 0, 0))
                              for a, c in zip(exps, coefs)])
            else:  # SP
                funcs.append([Primitive(a, c, center, (0, 0, 0))
                              for a, c in zip(exps, SP_S_COEF)])
                for lmn in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
                    funcs.append([Primitive(a, c, center, lmn)
                                  for a, c in zip(exps, SP_P_COEF)])
    # fold normalization into coefficients, then normalize the contraction
    for f in funcs:
        for p in f:
            p.coef *= norm_prim(p.alpha, p.lmn)
    return funcs


def hermite_E(i, j, t, Qx, a, b):
    """Hermite expansion coefficient E_t^{ij} (McMurchie-Davidson)."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * Qx * Qx)
    if j == 0:
        return (hermite_E(i - 1, j, t - 1, Qx, a, b) / (2 * p)
                - (q * Qx / a) * hermite_E(i - 1, j, t, Qx, a, b)
                + (t + 1) * hermite_E(i - 1, j, t + 1, Qx, a, b))
    return (hermite_E(i, j - 1, t - 1, Qx, a, b) / (2 * p)
            + (q * Qx / b) * hermite_E(i, j - 1, t, Qx, a, b)
            + (t + 1) * hermite_E(i, j - 1, t + 1, Qx, a, b))


def overlap_prim(pa, pb):
    a, b = pa.alpha, pb.alpha
    S = 1.0
    for d in range(3):
        S *= hermite_E(pa.lmn[d], pb.lmn[d], 0, pa.center[d] - pb.center[d], a, b)
    return S * (math.pi / (a + b)) ** 1.5


def kinetic_prim(pa, pb):
    a, b = pa.alpha, pb.alpha
    l2, m2, n2 = pb.lmn

    def ov(lmnb):
        q = Primitive(b, 1.0, pb.center, lmnb)
        return overlap_prim(pa, q)

    term0 = b * (2 * (l2 + m2 + n2) + 3) * ov((l2, m2, n2))
    term1 = -2 * b * b * (ov((l2 + 2, m2, n2)) + ov((l2, m2 + 2, n2))
                          + ov((l2, m2, n2 + 2)))
    term2 = -0.5 * (l2 * (l2 - 1) * ov((l2 - 2, m2, n2))
                    + m2 * (m2 - 1) * ov((l2, m2 - 2, n2))
                    + n2 * (n2 - 1) * ov((l2, m2, n2 - 2)))
    return term0 + term1 + term2


def hermite_R(t, u, v, n, p, PC):
    """Auxiliary Hermite Coulomb integral R^n_{tuv}."""
    T = p * (PC[0] ** 2 + PC[1] ** 2 + PC[2] ** 2)
    val = 0.0
    if t == u == v == 0:
        return (-2 * p) ** n * boys(n, T)
    if t == u == 0:
        if v > 1:
            val += (v - 1) * hermite_R(t, u, v - 2, n + 1, p, PC)
        val += PC[2] * hermite_R(t, u, v - 1, n + 1, p, PC)
        return val
    if t == 0:
        if u > 1:
            val += (u - 1) * hermite_R(t, u - 2, v, n + 1, p, PC)
        val += PC[1] * hermite_R(t, u - 1, v, n + 1, p, PC)
        return val
    if t > 1:
        val += (t - 1) * hermite_R(t - 2, u, v, n + 1, p, PC)
    val += PC[0] * hermite_R(t - 1, u, v, n + 1, p, PC)
    return val


def nuclear_prim(pa, pb, C):
    a, b = pa.alpha, pb.alpha
    p = a + b
    P = (a * pa.center + b * pb.center) / p
    AB = pa.center - pb.center
    PC = P - np.asarray(C, float)
    l1, m1, n1 = pa.lmn
    l2, m2, n2 = pb.lmn
    val = 0.0
    for t in range(l1 + l2 + 1):
        Et = hermite_E(l1, l2, t, AB[0], a, b)
        for u in range(m1 + m2 + 1):
            Eu = hermite_E(m1, m2, u, AB[1], a, b)
            for v in range(n1 + n2 + 1):
                Ev = hermite_E(n1, n2, v, AB[2], a, b)
                val += Et * Eu * Ev * hermite_R(t, u, v, 0, p, PC)
    return val * 2 * math.pi / p


def eri_prim(pa, pb, pc, pd):
    a, b, c, d = pa.alpha, pb.alpha, pc.alpha, pd.alpha
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * pa.center + b * pb.center) / p
    Q = (c * pc.center + d * pd.center) / q
    AB = pa.center - pb.center
    CD = pc.center - pd.center
    PQ = P - Q
    l1, m1, n1 = pa.lmn
    l2, m2, n2 = pb.lmn
    l3, m3, n3 = pc.lmn
    l4, m4, n4 = pd.lmn
    val = 0.0
    for t in range(l1 + l2 + 1):
        E1 = hermite_E(l1, l2, t, AB[0], a, b)
        for u in range(m1 + m2 + 1):
            E2 = hermite_E(m1, m2, u, AB[1], a, b)
            for v in range(n1 + n2 + 1):
                E3 = hermite_E(n1, n2, v, AB[2], a, b)
                for tau in range(l3 + l4 + 1):
                    E4 = hermite_E(l3, l4, tau, CD[0], c, d)
                    for nu in range(m3 + m4 + 1):
                        E5 = hermite_E(m3, m4, nu, CD[1], c, d)
                        for phi in range(n3 + n4 + 1):
                            E6 = hermite_E(n3, n4, phi, CD[2], c, d)
                            val += (E1 * E2 * E3 * E4 * E5 * E6
                                    * (-1) ** (tau + nu + phi)
                                    * hermite_R(t + tau, u + nu, v + phi, 0,
                                                alpha, PQ))
    return val * 2 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def contracted(fn, *funcs):
    from itertools import product
    val = 0.0
    for prims in product(*funcs):
        c = math.prod(p.coef for p in prims)
        val += c * fn(*prims)
    return val


def compute_integrals(atoms):
    funcs = build_shells(atoms)
    n = len(funcs)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            S[i, j] = S[j, i] = contracted(overlap_prim, funcs[i], funcs[j])
            T[i, j] = T[j, i] = contracted(kinetic_prim, funcs[i], funcs[j])
            v = sum(-CHARGE[sym] * contracted(
                lambda a, b: nuclear_prim(a, b, ctr), funcs[i], funcs[j])
                for sym, ctr in atoms)
            V[i, j] = V[j, i] = v
    # renormalize contractions so diagonal overlap is exactly 1
    d = 1.0 / np.sqrt(np.diag(S))
    S = S * d[:, None] * d[None, :]
    T = T * d[:, None] * d[None, :]
    V = V * d[:, None] * d[None, :]

    eri = np.zeros((n, n, n, n))
    done = np.zeros((n, n, n, n), bool)
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if (i * (i + 1) // 2 + j) < (k * (k + 1) // 2 + l):
                        continue
                    val = contracted(eri_prim, funcs[i], funcs[j],
                                     funcs[k], funcs[l])
                    val *= d[i] * d[j] * d[k] * d[l]
                    for (p, q, r, s) in [(i, j, k, l), (j, i, k, l),
                                         (i, j, l, k), (j, i, l, k),
                                         (k, l, i, j), (l, k, i, j),
                                         (k, l, j, i), (l, k, j, i)]:
                        eri[p, q, r, s] = val
    e_nuc = 0.0
    for i, (si, ci) in enumerate(atoms):
        for j, (sj, cj) in enumerate(atoms):
            if j < i:
                r = np.linalg.norm(np.asarray(ci) - np.asarray(cj))
                e_nuc += CHARGE[si] * CHARGE[sj] / r
    return S, T + V, eri, e_nuc


def rhf(S, hcore, eri, n_elec, e_nuc, max_iter=200, tol=1e-12):
    n = S.shape[0]
    nocc = n_elec // 2
    X = np.linalg.inv(np.linalg.cholesky(S)).T
    F = hcore.copy()
    D = np.zeros((n, n))
    e_old = 0.0
    for it in range(max_iter):
        Fp = X.T @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        Cocc = C[:, :nocc]
        D = 2.0 * Cocc @ Cocc.T
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = hcore + J - 0.5 * K
        e = 0.5 * np.sum(D * (hcore + F)) + e_nuc
        if abs(e - e_old) < tol and it > 1:
            break
        e_old = e
    return e, eps, C


def mo_integrals(hcore, eri, C):
    h1 = C.T @ hcore @ C
    g = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, C, C, C, C, optimize=True)
    return h1, g


def write_fcidump(path, h1, g, e_nuc, n_elec, ms2=0, orb_energies=None,
                  thresh=1e-12):
    n = h1.shape[0]
    with open(path, "w") as f:
        f.write(f"&FCI NORB={n},NELEC={n_elec},MS2={ms2},\n")
        f.write(" ORBSYM=" + ",".join(["1"] * n) + ",\n")
        f.write(" ISYM=1,\n&END\n")
        for i in range(n):
            for j in range(i + 1):
                for k in range(i + 1):
                    lmax = j + 1 if k == i else k + 1
                    for l in range(lmax):
                        v = g[i, j, k, l]
                        if abs(v) > thresh:
                            f.write(f" {v:23.16E} {i+1:4d} {j+1:4d} {k+1:4d} {l+1:4d}\n")
        for i in range(n):
            for j in range(i + 1):
                if abs(h1[i, j]) > thresh:
                    f.write(f" {h1[i,j]:23.16E} {i+1:4d} {j+1:4d}    0    0\n")
        if orb_energies is not None:
            for i in range(n):
                f.write(f" {orb_energies[i]:23.16E} {i+1:4d}    0    0    0\n")
        f.write(f" {e_nuc:23.16E}    0    0    0    0\n")


def gen_molecule(atoms, n_elec, path, meta):
    S, hcore, eri, e_nuc = compute_integrals(atoms)
    e_hf, eps, C = rhf(S, hcore, eri, n_elec, e_nuc)
    h1, g = mo_integrals(hcore, eri, C)
    write_fcidump(path, h1, g, e_nuc, n_elec, orb_energies=eps)
    with open(path.replace(".fcidump", ".meta"), "w") as f:
        f.write(f"basis STO-3G\n")
        f.write(f"convention chemists\n")
        f.write(f"spin_orbital_order interleaved\n")
        f.write(f"e_hf {e_hf:.12f}\n")
        for k, v in meta.items():
            f.write(f"{k} {v}\n")
        for sym, ctr in atoms:
            f.write(f"atom {sym} {ctr[0]:.8f} {ctr[1]:.8f} {ctr[2]:.8f}\n")
    return e_hf


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "fixtures"

    d = os.path.join(out, "h2_sto3g")
    os.makedirs(d, exist_ok=True)
    for r in np.arange(0.30, 2.5001, 0.05):
        r = round(r, 2)
        atoms = [("H", (0, 0, 0)), ("H", (0, 0, r * ANGSTROM))]
        path = os.path.join(d, f"h2_r{r:.2f}.fcidump")
        gen_molecule(atoms, 2, path, {"geometry_param_angstrom": f"{r:.2f}"})
        print("h2", r, flush=True)

    # near-equilibrium reference point used by the unit tests
    atoms = [("H", (0, 0, 0)), ("H", (0, 0, 0.735 * ANGSTROM))]
    gen_molecule(atoms, 2, os.path.join(d, "h2_r0.735.fcidump"),
                 {"geometry_param_angstrom": "0.735"})
    print("h2", 0.735, flush=True)

    # finer near-minimum grid used for the vibrational-frequency fits
    d = os.path.join(out, "h2_sto3g_fit")
    os.makedirs(d, exist_ok=True)
    for r in np.round(np.arange(0.36, 1.4801, 0.07), 4):
        atoms = [("H", (0, 0, 0)), ("H", (0, 0, r * ANGSTROM))]
        path = os.path.join(d, f"h2_r{r:.2f}.fcidump")
        gen_molecule(atoms, 2, path, {"geometry_param_angstrom": f"{r:.2f}"})
        print("h2fit", r, flush=True)

    d = os.path.join(out, "lih_sto3g")
    os.makedirs(d, exist_ok=True)
    for r in np.arange(0.80, 2.6001, 0.05):
        r = round(r, 2)
        atoms = [("Li", (0, 0, 0)), ("H", (0, 0, r * ANGSTROM))]
        path = os.path.join(d, f"lih_r{r:.2f}.fcidump")
        gen_molecule(atoms, 4, path, {"geometry_param_angstrom": f"{r:.2f}"})
        print("lih", r, flush=True)

    d = os.path.join(out, "lih_sto3g_fit")
    os.makedirs(d, exist_ok=True)
    for r in np.round(np.arange(1.06, 2.1101, 0.07), 4):
        atoms = [("Li", (0, 0, 0)), ("H", (0, 0, r * ANGSTROM))]
        path = os.path.join(d, f"lih_r{r:.2f}.fcidump")
        gen_molecule(atoms, 4, path, {"geometry_param_angstrom": f"{r:.2f}"})
        print("lihfit", r, flush=True)

    d = os.path.join(out, "h2o_sto3g")
    os.makedirs(d, exist_ok=True)
    for r in np.arange(0.95, 1.1001, 0.01):
        r = round(r, 2)
        for ang in range(90, 105):
            half = math.radians(ang / 2.0)
            rb = r * ANGSTROM
            atoms = [("O", (0, 0, 0)),
                     ("H", (rb * math.sin(half), 0, rb * math.cos(half))),
                     ("H", (-rb * math.sin(half), 0, rb * math.cos(half)))]
            path = os.path.join(d, f"h2o_r{r:.2f}_a{ang}.fcidump")
            gen_molecule(atoms, 10, path,
                         {"geometry_param_angstrom": f"{r:.2f}",
                          "geometry_param_angle_deg": f"{ang}"})
            print("h2o", r, ang)


if __name__ == "__main__":
    main()
