mod common;

use common::{gaussian, psd_with_gap, to_na};
use netkrig_core::linalg::{
    eigen_sym, eigenvalues_sym, power_method, principal_right_singular_vector, project_out_row,
    symmetric_sqrt, DenseMatrix,
};

#[test]
fn gram_spectrum_matches_singular_values() {
    for seed in 0..5 {
        let a = gaussian(9, 14, seed);
        let ours = eigenvalues_sym(&a.gram_cols()).unwrap();
        let mut sv: Vec<f64> = to_na(&a)
            .svd(false, false)
            .singular_values
            .iter()
            .map(|s| s * s)
            .collect();
        sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (i, s) in sv.iter().enumerate() {
            assert!(
                (ours[i] - s).abs() <= 1e-9 * sv[0],
                "seed {seed}: {} vs {s}",
                ours[i]
            );
        }
        // rank 9 out of 14: the tail is numerically zero
        assert!(ours[9..].iter().all(|v| v.abs() < 1e-9 * sv[0]));
    }
}

#[test]
fn eigen_reconstruction_and_trace() {
    let a = gaussian(12, 12, 3);
    let m = a.gram_rows();
    let e = eigen_sym(&m).unwrap();
    let v = to_na(e.vectors.as_ref().unwrap());
    let lam = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
    let rebuilt = &v * lam * v.transpose();
    let mm = to_na(&m);
    assert!((&mm - rebuilt).norm() <= 1e-8 * mm.norm());
    let sum: f64 = e.values.iter().sum();
    assert!((sum - m.trace()).abs() <= 1e-8 * m.trace());
}

#[test]
fn power_method_on_gapped_matrices() {
    for seed in 0..10 {
        let (m, exact) = psd_with_gap(10, 1.5, seed);
        let pair =
            power_method(10, |x, out| out.copy_from_slice(&m.mul_vec(x)), 200, seed).unwrap();
        assert!((pair.value - exact).abs() <= 1e-6 * exact, "seed {seed}");
        assert!(pair.value <= exact + 1e-9);
        let nv: f64 = pair.vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((nv - 1.0).abs() < 1e-12);
    }
}

#[test]
fn singular_vector_matches_explicit_normal_matrix() {
    let a = gaussian(20, 30, 11);
    let pair = principal_right_singular_vector(&a, 2000, 5).unwrap();
    let ata = to_na(&a.gram_cols());
    let eig = ata.clone().symmetric_eigen();
    let (imax, &lmax) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .unwrap();
    assert!((pair.value - lmax).abs() <= 1e-6 * lmax);
    let v1 = eig.eigenvectors.column(imax);
    let align: f64 = pair
        .vector
        .iter()
        .zip(v1.iter())
        .map(|(x, y)| x * y)
        .sum::<f64>()
        .abs();
    assert!((align - 1.0).abs() < 1e-6);
}

#[test]
fn symmetric_sqrt_multiplies_back() {
    for seed in 0..5 {
        let b = gaussian(6, 4, seed);
        let sigma = b.gram_rows(); // rank 4: exercises the clamp
        let s = symmetric_sqrt(&sigma).unwrap();
        assert!(s.asymmetry() < 1e-12);
        let back = s.matmul(&s);
        assert!(back.sub(&sigma).frobenius_norm() <= 1e-8 * sigma.frobenius_norm());
    }
}

#[test]
fn projection_matches_explicit_projector() {
    let a = gaussian(8, 12, 21);
    let dir = gaussian(1, 12, 22).row(0).to_vec();
    let n2: f64 = dir.iter().map(|v| v * v).sum();
    let p = DenseMatrix::from_fn(12, 12, |i, j| {
        f64::from(u8::from(i == j)) - dir[i] * dir[j] / n2
    });
    let ours = project_out_row(&a, &dir).unwrap();
    assert!(ours.sub(&a.matmul(&p)).frobenius_norm() < 1e-12 * a.frobenius_norm());
    let twice = project_out_row(&ours, &dir).unwrap();
    assert!(twice.sub(&ours).frobenius_norm() < 1e-12 * a.frobenius_norm());
    for r in ours.row_iter() {
        let ip: f64 = r.iter().zip(&dir).map(|(x, y)| x * y).sum();
        let rn: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(ip.abs() <= 1e-9 * rn * n2.sqrt() + 1e-15);
    }
}
