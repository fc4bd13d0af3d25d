//! Powell's direction-set method on the unit box.
//!
//! Line minimizations bracket the minimum by step doubling and then refine
//! it with golden-section steps accelerated by parabolic interpolation
//! (Brent's scheme). Points outside the box are clamped before evaluation.
//! The evaluation sequence depends only on the objective values, so a run
//! with a smaller budget is a prefix of a run with a larger one.

/// Line-search tolerance in normalized units.
pub const LINE_TOLERANCE: f64 = 1e-3;
/// Stop when a full sweep improves the objective by less than this
/// relative amount.
pub const SWEEP_TOLERANCE: f64 = 1e-4;
const INITIAL_STEP: f64 = 0.1;
const MAX_LINE_EVALS: usize = 12;
const GOLDEN: f64 = 0.381_966_011_250_105_1;
/// Below this |det| of the unit direction matrix the set is reset to axes.
const DEGENERATE_DET: f64 = 1e-6;

/// One objective evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Signals that the budget ran out or the caller asked to stop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stop;

struct Search<'a, F> {
    objective: &'a mut F,
    budget: usize,
    evaluations: Vec<Evaluation>,
}

impl<F: FnMut(&[f64]) -> Result<f64, Stop>> Search<'_, F> {
    fn eval(&mut self, point: &[f64]) -> Result<f64, Stop> {
        if self.evaluations.len() >= self.budget {
            return Err(Stop);
        }
        let point: Vec<f64> = point.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let value = (self.objective)(&point)?;
        self.evaluations.push(Evaluation { point, value });
        Ok(value)
    }

    fn at(&mut self, x: &[f64], d: &[f64], alpha: f64) -> Result<f64, Stop> {
        let p: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect();
        self.eval(&p)
    }

    /// Minimizes along `d` from `x` (where the value is `fx`). Returns the
    /// best step and value found.
    fn line(&mut self, x: &[f64], d: &[f64], fx: f64) -> Result<(f64, f64), Stop> {
        let (lo_lim, hi_lim) = feasible_range(x, d);
        if hi_lim - lo_lim < LINE_TOLERANCE {
            return Ok((0.0, fx));
        }
        // Bracket: find a < b < c with f(b) below both ends.
        let step = INITIAL_STEP.min(hi_lim.max(-lo_lim));
        let (mut a, mut fa, mut b, mut fb);
        let fwd = step.min(hi_lim);
        let f_fwd = if fwd > 0.0 { self.at(x, d, fwd)? } else { f64::INFINITY };
        if f_fwd < fx {
            (a, fa, b, fb) = (0.0, fx, fwd, f_fwd);
        } else {
            let back = (-step).max(lo_lim);
            let f_back = if back < 0.0 {
                self.at(x, d, back)?
            } else {
                f64::INFINITY
            };
            if f_back < fx {
                (a, fa, b, fb) = (0.0, fx, back, f_back);
            } else {
                return self.refine(x, d, (back, 0.0, fwd), (f_back, fx, f_fwd));
            }
        }
        // Expand away from `a` through `b` until the value rises or the box
        // ends.
        loop {
            let dir = (b - a).signum();
            let limit = if dir > 0.0 { hi_lim } else { lo_lim };
            if (b - limit).abs() < 1e-12 {
                let (lo, hi) = if dir > 0.0 { (a, b) } else { (b, a) };
                let (flo, fhi) = if dir > 0.0 { (fa, fb) } else { (fb, fa) };
                return self.refine_edge(x, d, lo, hi, flo, fhi, b, fb);
            }
            let c = if dir > 0.0 {
                (b + 2.0 * (b - a)).min(limit)
            } else {
                (b + 2.0 * (b - a)).max(limit)
            };
            let fc = self.at(x, d, c)?;
            if fc >= fb {
                let (lo, mid, hi) = if dir > 0.0 { (a, b, c) } else { (c, b, a) };
                let (flo, fmid, fhi) = if dir > 0.0 { (fa, fb, fc) } else { (fc, fb, fa) };
                return self.refine(x, d, (lo, mid, hi), (flo, fmid, fhi));
            }
            (a, fa, b, fb) = (b, fb, c, fc);
        }
    }

    /// The minimum sits at the box edge `edge`; refine inside `[lo, hi]`
    /// with the edge as the current best.
    #[allow(clippy::too_many_arguments)]
    fn refine_edge(
        &mut self,
        x: &[f64],
        d: &[f64],
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
        edge: f64,
        fedge: f64,
    ) -> Result<(f64, f64), Stop> {
        let mid = 0.5 * (lo + hi);
        if hi - lo < LINE_TOLERANCE {
            return Ok((edge, fedge));
        }
        let fmid = self.at(x, d, mid)?;
        if fmid < fedge {
            self.refine(x, d, (lo, mid, hi), (flo, fmid, fhi))
        } else {
            Ok((edge, fedge))
        }
    }

    /// Brent minimization inside the bracket `lo < mid < hi`.
    fn refine(
        &mut self,
        x: &[f64],
        d: &[f64],
        bracket: (f64, f64, f64),
        values: (f64, f64, f64),
    ) -> Result<(f64, f64), Stop> {
        let (mut a, mut b) = (bracket.0, bracket.2);
        let (mut xb, mut fxb) = (bracket.1, values.1);
        for (p, fp) in [(bracket.0, values.0), (bracket.2, values.2)] {
            if fp < fxb {
                (xb, fxb) = (p, fp);
            }
        }
        let (mut w, mut fw) = (xb, fxb);
        let (mut v, mut fv) = (xb, fxb);
        let (mut e, mut dstep) = (0.0f64, 0.0f64);
        for _ in 0..MAX_LINE_EVALS {
            let m = 0.5 * (a + b);
            let tol = 0.5 * LINE_TOLERANCE;
            if (xb - m).abs() <= 2.0 * tol - 0.5 * (b - a) {
                break;
            }
            let mut golden = true;
            if e.abs() > tol {
                let r = (xb - w) * (fxb - fv);
                let mut q = (xb - v) * (fxb - fw);
                let mut p = (xb - v) * q - (xb - w) * r;
                q = 2.0 * (q - r);
                if q > 0.0 {
                    p = -p;
                }
                q = q.abs();
                if p.abs() < (0.5 * q * e).abs() && p > q * (a - xb) && p < q * (b - xb) {
                    e = dstep;
                    dstep = p / q;
                    let u = xb + dstep;
                    if u - a < 2.0 * tol || b - u < 2.0 * tol {
                        dstep = if xb < m { tol } else { -tol };
                    }
                    golden = false;
                }
            }
            if golden {
                e = if xb >= m { a - xb } else { b - xb };
                dstep = GOLDEN * e;
            }
            let u = if dstep.abs() >= tol {
                xb + dstep
            } else {
                xb + tol * dstep.signum()
            };
            let fu = self.at(x, d, u)?;
            if fu <= fxb {
                if u >= xb {
                    a = xb;
                } else {
                    b = xb;
                }
                (v, fv, w, fw, xb, fxb) = (w, fw, xb, fxb, u, fu);
            } else {
                if u < xb {
                    a = u;
                } else {
                    b = u;
                }
                if fu <= fw || w == xb {
                    (v, fv, w, fw) = (w, fw, u, fu);
                } else if fu <= fv || v == xb || v == w {
                    (v, fv) = (u, fu);
                }
            }
        }
        Ok((xb, fxb))
    }
}

/// Step range `[lo, hi]` keeping `x + t·d` inside the unit box.
fn feasible_range(x: &[f64], d: &[f64]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (&xi, &di) in x.iter().zip(d) {
        if di.abs() < 1e-15 {
            continue;
        }
        let (t0, t1) = ((0.0 - xi) / di, (1.0 - xi) / di);
        lo = lo.max(t0.min(t1));
        hi = hi.min(t0.max(t1));
    }
    (lo.min(0.0), hi.max(0.0))
}

fn axes(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

#[allow(clippy::needless_range_loop)]
fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty");
        if m[pivot][col].abs() < 1e-300 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let k = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= k * m[col][c];
            }
        }
    }
    det
}

/// Minimizes `objective` over `[0, 1]^n` from `start`, spending at most
/// `budget` evaluations, and returns every evaluation in order. The first
/// evaluation is always `start` itself. The objective may return
/// [`Stop`] to end the search early.
pub fn powell_minimize<F>(mut objective: F, start: &[f64], budget: usize) -> Vec<Evaluation>
where
    F: FnMut(&[f64]) -> Result<f64, Stop>,
{
    let n = start.len();
    let mut search = Search {
        objective: &mut objective,
        budget,
        evaluations: Vec::new(),
    };
    let mut x: Vec<f64> = start.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let Ok(mut fx) = search.eval(&x) else {
        return search.evaluations;
    };
    let mut dirs = axes(n);
    let _ = (|| -> Result<(), Stop> {
        loop {
            let (x0, f0) = (x.clone(), fx);
            let (mut biggest, mut biggest_at) = (0.0, 0);
            for (i, d) in dirs.clone().iter().enumerate() {
                let before = fx;
                let (t, ft) = search.line(&x, d, fx)?;
                if ft < fx {
                    x.iter_mut()
                        .zip(d)
                        .for_each(|(xi, di)| *xi = (*xi + t * di).clamp(0.0, 1.0));
                    fx = ft;
                }
                if before - fx > biggest {
                    biggest = before - fx;
                    biggest_at = i;
                }
            }
            let improvement = f0 - fx;
            if improvement <= SWEEP_TOLERANCE * f0.abs().max(1e-12) {
                return Ok(());
            }
            let new_dir: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
            let norm = new_dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            let extrapolated: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| 2.0 * a - b).collect();
            let fe = search.eval(&extrapolated)?;
            if fe < f0 {
                let t = 2.0 * (f0 - 2.0 * fx + fe) * (f0 - fx - biggest).powi(2) - biggest * (f0 - fe).powi(2);
                if t < 0.0 {
                    let unit: Vec<f64> = new_dir.iter().map(|v| v / norm).collect();
                    let (s, fs) = search.line(&x, &unit, fx)?;
                    if fs < fx {
                        x.iter_mut()
                            .zip(&unit)
                            .for_each(|(xi, di)| *xi = (*xi + s * di).clamp(0.0, 1.0));
                        fx = fs;
                    }
                    dirs.remove(biggest_at);
                    dirs.push(unit);
                    if determinant(&dirs).abs() < DEGENERATE_DET {
                        dirs = axes(n);
                    }
                }
            }
        }
    })();
    search.evaluations
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(target: Vec<f64>) -> impl FnMut(&[f64]) -> Result<f64, Stop> {
        move |x| Ok(x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum())
    }

    fn best(evals: &[Evaluation]) -> &Evaluation {
        evals.iter().min_by(|a, b| a.value.total_cmp(&b.value)).unwrap()
    }

    #[test]
    fn budget_one_is_the_start() {
        let evals = powell_minimize(quadratic(vec![0.3; 15]), &[0.5; 15], 1);
        assert_eq!(evals.len(), 1);
        assert_eq!(evals[0].point, vec![0.5; 15]);
    }

    #[test]
    fn converges_on_a_quadratic() {
        let target: Vec<f64> = (0..15).map(|i| 0.1 + 0.05 * i as f64).collect();
        let evals = powell_minimize(quadratic(target.clone()), &[0.5; 15], 200);
        assert!(evals.len() <= 200);
        let b = best(&evals);
        let dist = b
            .point
            .iter()
            .zip(&target)
            .map(|(a, t)| (a - t).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(dist <= 1e-2, "distance {dist} after {} evaluations", evals.len());
    }

    #[test]
    fn rotated_valley() {
        let f = |x: &[f64]| -> Result<f64, Stop> {
            let u = x[0] + x[1] - 1.0;
            let v = x[0] - x[1] - 0.2;
            Ok(u * u + 0.01 * v * v)
        };
        let evals = powell_minimize(f, &[0.1, 0.1], 300);
        let b = best(&evals);
        assert!(
            (b.point[0] - 0.6).abs() < 0.02 && (b.point[1] - 0.4).abs() < 0.02,
            "{:?}",
            b.point
        );
    }

    #[test]
    fn bounds_are_respected() {
        let evals = powell_minimize(quadratic(vec![1.7, -0.4]), &[0.5, 0.5], 100);
        assert!(evals.iter().all(|e| e.point.iter().all(|v| (0.0..=1.0).contains(v))));
        let b = best(&evals);
        assert!((b.point[0] - 1.0).abs() < 1e-9 && b.point[1].abs() < 1e-9);
    }

    #[test]
    fn smaller_budgets_are_prefixes() {
        let target: Vec<f64> = (0..6).map(|i| 0.9 - 0.13 * i as f64).collect();
        let long = powell_minimize(quadratic(target.clone()), &[0.2; 6], 120);
        for budget in [1, 7, 33, 64] {
            let short = powell_minimize(quadratic(target.clone()), &[0.2; 6], budget);
            assert_eq!(short[..], long[..short.len()]);
            assert!(short.len() <= budget);
        }
    }

    #[test]
    fn determinant_of_axes() {
        assert_eq!(determinant(&axes(4)), 1.0);
        assert_eq!(determinant(&[vec![1.0, 2.0], vec![2.0, 4.0]]), 0.0);
    }
}
