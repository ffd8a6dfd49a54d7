//! Restarted GMRES with right preconditioning.

use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    pub restart: usize,
    pub max_iter: usize,
    /// Target for `‖b − Ax‖ / ‖b‖`.
    pub tol: f64,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { restart: 40, max_iter: 400, tol: 1e-13 }
    }
}

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<C64>,
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    if a.norm() == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a.norm() / t, (a / a.norm()) * b.conj() / t)
}

/// Solves `A x = b` using `A M⁻¹ y = b`, `x = M⁻¹ y`.
pub fn gmres<A, M>(apply_a: A, apply_m_inv: M, b: &[C64], x0: Option<Vec<C64>>, opts: GmresOptions) -> GmresOutcome
where
    A: Fn(&[C64]) -> Vec<C64>,
    M: Fn(&[C64]) -> Vec<C64>,
{
    let n = b.len();
    let bnorm = norm(b);
    let mut x = x0.unwrap_or_else(|| vec![C64::new(0.0, 0.0); n]);
    if bnorm == 0.0 {
        return GmresOutcome { x: vec![C64::new(0.0, 0.0); n], iterations: 0, relative_residual: 0.0, converged: true };
    }
    let residual = |x: &[C64]| -> Vec<C64> {
        let ax = apply_a(x);
        b.iter().zip(&ax).map(|(p, q)| p - q).collect()
    };
    let mut r = residual(&x);
    let mut rel = norm(&r) / bnorm;
    let mut iterations = 0;
    let m = opts.restart.max(1);
    while rel > opts.tol && iterations < opts.max_iter {
        let beta = norm(&r);
        let mut basis: Vec<Vec<C64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h: Vec<Vec<C64>> = Vec::new();
        let mut cs: Vec<(f64, C64)> = Vec::new();
        let mut g = vec![C64::new(beta, 0.0)];
        for _ in 0..m {
            iterations += 1;
            let z = apply_m_inv(basis.last().unwrap());
            let mut w = apply_a(&z);
            let mut col = Vec::with_capacity(basis.len() + 1);
            for v in &basis {
                let hij = dot(v, &w);
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
                col.push(hij);
            }
            let wn = norm(&w);
            col.push(C64::new(wn, 0.0));
            for (i, &(c, s)) in cs.iter().enumerate() {
                let (p, q) = (col[i], col[i + 1]);
                col[i] = c * p + s * q;
                col[i + 1] = -s.conj() * p + c * q;
            }
            let k = col.len() - 2;
            let (c, s) = givens(col[k], col[k + 1]);
            let (p, q) = (col[k], col[k + 1]);
            col[k] = c * p + s * q;
            col[k + 1] = C64::new(0.0, 0.0);
            cs.push((c, s));
            let gk = g[k];
            g[k] = c * gk;
            g.push(-s.conj() * gk);
            h.push(col);
            let est = g[k + 1].norm() / bnorm;
            if wn == 0.0 || est <= opts.tol * 0.5 || iterations >= opts.max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        let kdim = h.len();
        let mut y = vec![C64::new(0.0, 0.0); kdim];
        for i in (0..kdim).rev() {
            let mut s = g[i];
            for j in i + 1..kdim {
                s -= h[j][i] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut update = vec![C64::new(0.0, 0.0); n];
        for (yj, vj) in y.iter().zip(&basis) {
            for (u, v) in update.iter_mut().zip(vj) {
                *u += yj * v;
            }
        }
        let dx = apply_m_inv(&update);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        r = residual(&x);
        let new_rel = norm(&r) / bnorm;
        if !(new_rel < rel) && new_rel > opts.tol {
            rel = new_rel;
            break;
        }
        rel = new_rel;
    }
    GmresOutcome { x, iterations, relative_residual: rel, converged: rel <= opts.tol }
}
