//! Real root isolation on intervals: bisection, monotone pieces, and a
//! sampled sign-change scan with local refinement.

/// Bisect a sign change of `f` on `[a, b]` down to adjacent floats.
///
/// `fa` and `fb` must be nonzero with opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64, fb: f64) -> f64 {
    debug_assert!(fa * fb < 0.0, "no sign change on [{a}, {b}]: {fa}, {fb}");
    for _ in 0..2100 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    if fa.abs() < f(b).abs() {
        a
    } else {
        b
    }
}

/// Roots of `f` on `[nodes[0], nodes[last]]` given that `f` is monotone
/// between consecutive nodes.
///
/// `values[i]` is `f(nodes[i])` (or its one-sided limit at an open end).
/// Interior nodes whose value is zero, or flagged by `is_zero`, count as a
/// single root at the node; a zero limit at the left end is not a root.
pub fn roots_on_monotone_pieces<F: Fn(f64) -> f64>(
    f: F,
    nodes: &[f64],
    values: &[f64],
    is_zero: impl Fn(usize) -> bool,
) -> Vec<f64> {
    let mut roots = Vec::new();
    let zero: Vec<bool> = (0..nodes.len()).map(|i| values[i] == 0.0 || is_zero(i)).collect();
    for i in 1..nodes.len().saturating_sub(1) {
        if zero[i] {
            roots.push(nodes[i]);
        }
    }
    for i in 0..nodes.len().saturating_sub(1) {
        let (fa, fb) = (values[i], values[i + 1]);
        if zero[i] || zero[i + 1] {
            continue;
        }
        if (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(&f, nodes[i], nodes[i + 1], fa, fb));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Merge roots closer than `rel_tol` relative to their magnitude.
pub fn dedup_roots(mut roots: Vec<f64>, rel_tol: f64) -> Vec<f64> {
    roots.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(&p) if (r - p).abs() <= rel_tol * r.abs().max(p.abs()) => {}
            _ => out.push(r),
        }
    }
    out
}

/// Scan `(a, b)` with `subdivisions` equal cells, bisect every sign change,
/// and refine around sampled local minima of `|f|` that might hide a pair
/// of close roots.
pub fn scan_roots<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, subdivisions: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    scan_into(f, a, b, subdivisions, 0, &mut roots);
    dedup_roots(roots, 1e-12)
}

const MAX_REFINE_DEPTH: usize = 8;

fn scan_into<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    subdivisions: usize,
    depth: usize,
    roots: &mut Vec<f64>,
) {
    let h = (b - a) / subdivisions as f64;
    let xs: Vec<f64> = (0..=subdivisions)
        .map(|i| if i == subdivisions { b } else { a + h * i as f64 })
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    for i in 0..subdivisions {
        let (fa, fb) = (fs[i], fs[i + 1]);
        if !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        if fa == 0.0 {
            roots.push(xs[i]);
        } else if fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(f, xs[i], xs[i + 1], fa, fb));
        }
    }
    if fs[subdivisions] == 0.0 {
        roots.push(b);
    }
    if depth >= MAX_REFINE_DEPTH {
        return;
    }
    for i in 1..subdivisions {
        let (l, m, r) = (fs[i - 1], fs[i], fs[i + 1]);
        let same_sign = (l < 0.0) == (m < 0.0) && (m < 0.0) == (r < 0.0);
        if same_sign && m.abs() < l.abs() && m.abs() < r.abs() {
            // A dip toward zero: refine unless the dip is clearly shallow.
            let depth_ratio = m.abs() / l.abs().min(r.abs());
            if depth_ratio < 0.5 {
                scan_into(f, xs[i - 1], xs[i + 1], 16, depth + 1, roots);
            }
        }
    }
}

/// Dense real polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    /// `c x^k`.
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(0.0)
                        + other.coeffs.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Cauchy bound: every root has modulus below `1 + max |a_i / a_deg|`.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.coeffs[self.degree()];
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_reaches_adjacent_floats() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, -2.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn monotone_pieces_find_each_crossing() {
        // (x-1)(x-3): decreasing on [0,2], increasing on [2,5].
        let f = |x: f64| (x - 1.0) * (x - 3.0);
        let nodes = [0.0, 2.0, 5.0];
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let roots = roots_on_monotone_pieces(f, &nodes, &values, |_| false);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.0).abs() < 1e-15 && (roots[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn tangency_at_node_counts_once() {
        let f = |x: f64| (x - 2.0) * (x - 2.0);
        let nodes = [0.0, 2.0, 5.0];
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        assert_eq!(roots_on_monotone_pieces(f, &nodes, &values, |_| false), vec![2.0]);
    }

    #[test]
    fn scan_resolves_close_pair() {
        let f = |x: f64| (x - 0.500) * (x - 0.5001);
        let roots = scan_roots(&f, 0.0, 1.0, 64);
        assert_eq!(roots.len(), 2, "{roots:?}");
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::new(vec![-1.0, 0.0, 1.0]);
        let q = Poly::new(vec![1.0, 1.0]);
        assert_eq!(p.mul(&q).coeffs(), &[-1.0, -1.0, 1.0, 1.0]);
        assert_eq!(p.add(&q.scale(-1.0)).coeffs(), &[-2.0, -1.0, 1.0]);
        assert_eq!(p.eval(3.0), 8.0);
        assert_eq!(Poly::monomial(2.0, 3).degree(), 3);
        assert!(p.cauchy_bound() >= 1.0);
        assert_eq!(Poly::new(vec![1.0, 0.0, 0.0]).degree(), 0);
    }
}
