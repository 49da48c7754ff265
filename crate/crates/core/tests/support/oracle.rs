//! Independent quad oracle: least squares on the raw 2×2 commutation
//! 𝒱′(λ)𝒰(λ) − 𝒰′(λ)𝒱(λ) at two spectral points, written from the matrix
//! formulas alone (no crate types), with the constraint uu′ = vv′ built in.

#![allow(dead_code, clippy::too_many_arguments, clippy::needless_range_loop)]

use num_complex::Complex64 as C;

type M2 = [[C; 2]; 2];

fn mul(x: &M2, y: &M2) -> M2 {
    let mut r = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

fn u_matrix(a: C, u: f64, gamma: f64) -> M2 {
    let l = C::from_polar(1.0, gamma);
    let alpha = (a.norm_sqr() + u * u + 1.0 / (u * u) + 2.0 * (2.0 * gamma).cos()).sqrt();
    [
        [a / alpha, -(l * u + 1.0 / (l * u)) / alpha],
        [(l / u + u / l) / alpha, a.conj() / alpha],
    ]
}

fn v_matrix(b: C, v: f64, gamma: f64) -> M2 {
    let l = C::from_polar(1.0, gamma);
    let i = C::new(0.0, 1.0);
    let beta = (b.norm_sqr() + v * v + 1.0 / (v * v) - 2.0 * (2.0 * gamma).cos()).sqrt();
    [
        [b / beta, (-i * l * v + i / (l * v)) / beta],
        [(i * l / v - i * v / l) / beta, b.conj() / beta],
    ]
}

/// Frobenius norm of the commutation defect for explicit edge data.
pub fn residual(a: C, u: f64, b: C, v: f64, ap: C, up: f64, bp: C, vp: f64, gamma: f64) -> f64 {
    let lhs = mul(&v_matrix(bp, vp, gamma), &u_matrix(a, u, gamma));
    let rhs = mul(&u_matrix(ap, up, gamma), &v_matrix(b, v, gamma));
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += (lhs[i][j] - rhs[i][j]).norm_sqr();
        }
    }
    s.sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct OracleSolution {
    pub ap: C,
    pub up: f64,
    pub bp: C,
    pub vp: f64,
    pub residual: f64,
}

const GAMMAS: [f64; 2] = [std::f64::consts::FRAC_PI_6, -std::f64::consts::FRAC_PI_6];

/// Unknowns x = (Re a′, Im a′, Re b′, Im b′, ln u′); v′ = u·u′/v.
fn unpack(x: &[f64; 5], u: f64, v: f64) -> (C, f64, C, f64) {
    let up = x[4].exp();
    (C::new(x[0], x[1]), up, C::new(x[2], x[3]), u * up / v)
}

fn residual_vector(x: &[f64; 5], a: C, u: f64, b: C, v: f64) -> Vec<f64> {
    let (ap, up, bp, vp) = unpack(x, u, v);
    let mut r = Vec::with_capacity(16);
    for g in GAMMAS {
        let lhs = mul(&v_matrix(bp, vp, g), &u_matrix(a, u, g));
        let rhs = mul(&u_matrix(ap, up, g), &v_matrix(b, v, g));
        for i in 0..2 {
            for j in 0..2 {
                let d = lhs[i][j] - rhs[i][j];
                r.push(d.re);
                r.push(d.im);
            }
        }
    }
    r
}

fn sq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Solve the 5×5 system `m·x = y` by Gaussian elimination with partial pivoting.
fn solve5(mut m: [[f64; 5]; 5], mut y: [f64; 5]) -> Option<[f64; 5]> {
    for c in 0..5 {
        let p = (c..5).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        y.swap(c, p);
        for r in c + 1..5 {
            let f = m[r][c] / m[c][c];
            for k in c..5 {
                m[r][k] -= f * m[c][k];
            }
            y[r] -= f * y[c];
        }
    }
    let mut x = [0.0; 5];
    for c in (0..5).rev() {
        let s: f64 = (c + 1..5).map(|k| m[c][k] * x[k]).sum();
        x[c] = (y[c] - s) / m[c][c];
    }
    Some(x)
}

fn levenberg_marquardt(mut x: [f64; 5], a: C, u: f64, b: C, v: f64) -> [f64; 5] {
    let mut mu = 1e-3;
    let mut r = residual_vector(&x, a, u, b, v);
    for _ in 0..500 {
        if sq(&r) < 1e-30 {
            break;
        }
        // central-difference Jacobian
        let mut jac = vec![[0.0; 5]; r.len()];
        for k in 0..5 {
            let h = 1e-7 * x[k].abs().max(1.0);
            let (mut xp, mut xm) = (x, x);
            xp[k] += h;
            xm[k] -= h;
            let (rp, rm) = (residual_vector(&xp, a, u, b, v), residual_vector(&xm, a, u, b, v));
            for i in 0..r.len() {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = [[0.0; 5]; 5];
        let mut jtr = [0.0; 5];
        for i in 0..r.len() {
            for p in 0..5 {
                jtr[p] -= jac[i][p] * r[i];
                for q in 0..5 {
                    jtj[p][q] += jac[i][p] * jac[i][q];
                }
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = jtj;
            for p in 0..5 {
                damped[p][p] += mu * jtj[p][p].max(1e-12);
            }
            let Some(dx) = solve5(damped, jtr) else { break };
            let mut xn = x;
            for p in 0..5 {
                xn[p] += dx[p];
            }
            let rn = residual_vector(&xn, a, u, b, v);
            if sq(&rn) < sq(&r) {
                x = xn;
                r = rn;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Oracle solution started from (a′, b′, u′, v′) = (a, b, v, u); further
/// starts only if that one does not converge.
pub fn solve(a: C, u: f64, b: C, v: f64) -> Option<OracleSolution> {
    let starts = [
        [a.re, a.im, b.re, b.im, v.ln()],
        [a.re, a.im, b.re, b.im, u.ln()],
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [-a.re, -a.im, -b.re, -b.im, v.ln()],
    ];
    let mut best: Option<OracleSolution> = None;
    for s in starts {
        let x = levenberg_marquardt(s, a, u, b, v);
        let (ap, up, bp, vp) = unpack(&x, u, v);
        let res = GAMMAS
            .iter()
            .map(|&g| residual(a, u, b, v, ap, up, bp, vp, g))
            .fold(0.0, f64::max);
        let cand = OracleSolution {
            ap,
            up,
            bp,
            vp,
            residual: res,
        };
        if best.is_none_or(|b| res < b.residual) {
            best = Some(cand);
        }
        if res < 1e-13 {
            break;
        }
    }
    best
}
