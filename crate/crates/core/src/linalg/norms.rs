use num_complex::Complex64;

use super::eigen::jacobi_eigenvalues;
use super::ComplexMatrix;

/// Singular values (descending) by one-sided Jacobi.
///
/// Columns of the taller orientation are orthogonalised pairwise; the final
/// column norms are the singular values. Unlike going through the Gram
/// matrix this keeps small singular values accurate to `~ε‖m‖` rather than
/// `~√ε‖m‖`.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let tall = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let (rows, cols) = (tall.rows(), tall.cols());
    let mut c: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| tall[(i, j)]).collect())
        .collect();

    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = c[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = c[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = c[p].iter().zip(&c[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Rephase column q so the overlap is real, then rotate.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let x = c[p][i];
                    let y = c[q][i] * phase.conj();
                    c[p][i] = x * cs - y * sn;
                    c[q][i] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = c
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `Tr sqrt(O O†)`.
///
/// Hermitian input takes the cheaper route through `Σ|λ|`.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.hermiticity_defect() <= 1e-12 * (1.0 + m.frobenius_norm()) {
        jacobi_eigenvalues(m).iter().map(|l| l.abs()).sum()
    } else {
        singular_values(m).iter().sum()
    }
}
