//! Test matrices with known reference results.
//!
//! All matrices are embedded verbatim (integers, short decimals, or 14-digit
//! values exactly as printed).

use crate::matrix::{ComplexMatrix, C64};

/// 20x20 integer matrix with eigenvalues 2 (Jordan blocks 4, 3, 3) and
/// 3 (Jordan blocks 5, 5).
pub const GRID20: [[f64; 20]; 20] = [
    [0.0, 4.0, 0.0, -4.0, 0.0, -2.0, 1.0, 0.0, 0.0, -1.0, -1.0, -1.0, -1.0, 2.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0],
    [0.0, 3.0, 3.0, -4.0, 1.0, 0.0, 4.0, 1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, -1.0, -1.0],
    [1.0, -4.0, 2.0, 10.0, -3.0, 1.0, -7.0, -2.0, -1.0, 3.0, 2.0, 0.0, 0.0, -1.0, 0.0, 3.0, -1.0, 1.0, 1.0, 2.0],
    [-1.0, -1.0, 2.0, 5.0, -2.0, -1.0, -5.0, -1.0, -1.0, 2.0, 0.0, -1.0, 0.0, 1.0, 0.0, 2.0, -1.0, -1.0, -1.0, 1.0],
    [-1.0, -2.0, 2.0, 1.0, 1.0, 1.0, -1.0, 0.0, -2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, -1.0, 0.0, 0.0],
    [1.0, 4.0, 1.0, -12.0, 4.0, 2.0, 13.0, 3.0, 0.0, -4.0, 0.0, 0.0, -2.0, -1.0, 1.0, -6.0, 1.0, 1.0, 0.0, -3.0],
    [-1.0, -1.0, 1.0, 5.0, -2.0, 0.0, -4.0, -2.0, 0.0, 1.0, -1.0, 0.0, 0.0, 1.0, 0.0, 4.0, 0.0, -1.0, -1.0, 2.0],
    [1.0, 2.0, -4.0, 0.0, 1.0, 0.0, 1.0, 1.0, 4.0, -2.0, -1.0, 1.0, 0.0, -1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0],
    [0.0, -5.0, 2.0, 10.0, -5.0, -1.0, -10.0, -2.0, -1.0, 6.0, 3.0, -2.0, 0.0, 0.0, 0.0, 3.0, -3.0, 0.0, 1.0, 2.0],
    [1.0, 1.0, 1.0, -1.0, 2.0, 2.0, 4.0, 0.0, 1.0, -1.0, -1.0, 2.0, 0.0, -1.0, 0.0, 0.0, 2.0, 1.0, -1.0, 0.0],
    [1.0, -1.0, 0.0, 2.0, 1.0, 2.0, 1.0, 0.0, 1.0, -1.0, 3.0, 2.0, 0.0, -1.0, 0.0, 0.0, 1.0, 1.0, -1.0, 0.0],
    [-1.0, -3.0, 0.0, 5.0, -1.0, 2.0, -4.0, -1.0, 0.0, 1.0, -1.0, 4.0, 4.0, 1.0, -2.0, 2.0, 0.0, -1.0, 0.0, 1.0],
    [-2.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 3.0, 2.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0],
    [-3.0, 4.0, -1.0, -4.0, 0.0, -2.0, 1.0, 0.0, 0.0, -1.0, -1.0, -1.0, -2.0, 5.0, 2.0, 0.0, 0.0, -1.0, 1.0, 0.0],
    [-2.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 2.0, 3.0, 0.0, 0.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, -2.0, 3.0, 1.0, 2.0, -1.0, -1.0, 2.0, -2.0, -2.0, 2.0, 0.0, 0.0, 0.0, 5.0, 2.0, 0.0, 0.0, 1.0],
    [6.0, 3.0, -6.0, 3.0, 6.0, 4.0, 7.0, 0.0, 7.0, -7.0, 1.0, 5.0, -2.0, -6.0, 1.0, 0.0, 8.0, 6.0, -1.0, 0.0],
    [0.0, 2.0, -4.0, -4.0, 1.0, -1.0, 4.0, 1.0, 0.0, -1.0, 0.0, -1.0, -1.0, 0.0, 1.0, -2.0, 0.0, 3.0, 4.0, -1.0],
    [1.0, -4.0, -1.0, 11.0, -4.0, 1.0, -8.0, -3.0, -1.0, 3.0, 2.0, 0.0, 0.0, -1.0, 0.0, 4.0, -1.0, 1.0, 4.0, 3.0],
    [0.0, 0.0, -1.0, 1.0, -2.0, 0.0, -1.0, -2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 4.0],
];

/// Baseline eigenvalue estimate near 2 used to start the `m = 3` runs.
pub const GRID20_LAMBDA_NEAR_2: C64 = C64::new(1.999881443477439, -0.000118714860725);
/// Baseline eigenvalue estimate near 3 used to start the `m = 2` runs.
pub const GRID20_LAMBDA_NEAR_3: C64 = C64::new(3.001287762162967, 0.0);

/// 5x5 matrix with the single eigenvalue 2 of multiplicity support 1 x 5.
pub const JBITE_A: [[f64; 5]; 5] = [
    [2.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, -8.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 2.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 2.0, 1.0],
    [0.0, -10000.0, 1000.0, -100.0, 12.0],
];

/// Perturbation pattern added to [`JBITE_A`] with weight `1e-5`.
pub const JBITE_A_PERTURBATION: [[f64; 5]; 5] = [
    [-0.092, -0.653, -0.201, -0.416, -0.787],
    [-0.135, -0.218, 0.054, -0.136, -0.255],
    [0.651, 0.663, -0.166, -0.969, -0.603],
    [-0.833, 0.607, 0.314, 0.969, -0.020],
    [-0.733, -0.879, 0.256, -0.665, -0.321],
];

pub const JBITE_A_PERTURBATION_SCALE: f64 = 1e-5;

/// 8x8 matrix with a simple eigenvalue 2.001 and a defective eigenvalue 2
/// with Jordan blocks 5 and 2 (multiplicity support 2 x 2).
pub const EXAMPLE4: [[f64; 8]; 8] = [
    [3.006, 2.0, 1.005, -1.001, -0.002, -0.001, -0.001, -1.0],
    [5.0, 2.0, 5.0, -1.0, -2.0, -1.0, -1.0, 0.0],
    [-5.006, -3.0, -3.005, 2.001, 3.002, 2.001, 0.001, 2.0],
    [-6.0, -1.0, -6.0, 3.0, 5.0, 3.0, 0.0, 1.0],
    [-5.0, -1.0, -5.0, 1.0, 6.0, 3.0, 0.0, 1.0],
    [1.0, 0.0, 1.0, 0.0, -1.0, 1.0, 0.0, 0.0],
    [-4.0, -2.0, -4.0, 1.0, 3.0, 2.0, 2.0, 2.0],
    [5.0, 0.0, 5.0, -1.0, -2.0, -1.0, -1.0, 2.0],
];

/// A nearby matrix with a single eigenvalue (about 2.000125) carrying Jordan
/// blocks 6 and 2, known only to 14 digits.
pub const MATRIX_B: [[f64; 8]; 8] = [
    [3.0059955942896, 1.9999978851470, 1.0049959180573, -1.0010020728471, -0.0020046893569, -0.0010002300301, -0.0010132897111, -0.9999977586058],
    [4.9999998736434, 1.9999937661529, 5.0000001193777, -1.0000000065301, -2.0000000129428, -0.9999999934070, -0.9999999926252, -0.0000169379637],
    [-5.0060008381014, -3.0000021146845, -3.0050076499797, 2.0009979267360, 3.0019953102172, 2.0009997699688, 0.0009867094117, 2.0000022421372],
    [-5.9999927405774, -1.0000021677309, -6.0000074892946, 2.9999962015789, 4.9999997701478, 2.9999999999775, -0.0000002324249, 0.9999978331627],
    [-4.9999995930006, -0.9999961877596, -5.0000095377366, 0.9999880178349, 5.9999870716625, 3.0000002295144, -0.0000150335883, 0.9999994536709],
    [0.9999971940837, -0.0000010574036, 1.0000006545259, -0.0000047736356, -1.0000023807994, 0.9999966612522, -0.0000036987224, -0.0000054161918],
    [-4.0000092166543, -1.9999997569827, -3.9999765043908, 1.0000142841290, 3.0000142782479, 2.0000000005386, 2.0000249853630, 2.0000002431865],
    [4.9999998983338, 0.0000026655939, 5.0000001062663, -0.9999999958672, -1.9999999894366, -1.0000000065916, -1.0000000120790, 2.0000133696815],
];

/// Pseudo-eigenvalue reference for [`MATRIX_B`] with support 2 x 2.
pub const MATRIX_B_PSEUDO_EIGENVALUE: f64 = 2.000125000000078;

fn from_array<const N: usize>(rows: &[[f64; N]; N]) -> ComplexMatrix {
    ComplexMatrix::from_fn(N, N, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn grid20() -> ComplexMatrix {
    from_array(&GRID20)
}

pub fn jbite_a() -> ComplexMatrix {
    from_array(&JBITE_A)
}

/// [`JBITE_A`] plus `1e-5` times the printed perturbation.
pub fn jbite_a_perturbed() -> ComplexMatrix {
    let a = jbite_a();
    let e = from_array(&JBITE_A_PERTURBATION).scale(C64::new(JBITE_A_PERTURBATION_SCALE, 0.0));
    &a + &e
}

pub fn example4() -> ComplexMatrix {
    from_array(&EXAMPLE4)
}

pub fn matrix_b() -> ComplexMatrix {
    from_array(&MATRIX_B)
}

/// Reference rows for the Segre anchor sweep on [`GRID20`]:
/// `(k, computed eigenvalue, condition number, residual norm)`.
pub const GRID20_ANCHOR_TABLE_NEAR_2: [(usize, f64, f64, f64, f64); 4] = [
    (1, 1.999881443477439, -0.000118714860725, 560995239.6, 1e-15),
    (2, 1.999999993438010, -0.000000011324234, 147603979.2, 1e-15),
    (3, 2.0, 0.0, 58.7, 6e-16),
    (4, 2.109885640097783, -0.004348977611146, 24.1, 0.007),
];

pub const GRID20_ANCHOR_TABLE_NEAR_3: [(usize, f64, f64, f64, f64); 6] = [
    (1, 3.001287762162967, 0.0, 2161090332264.6, 3e-15),
    (2, 3.001287762162967, 0.0, 7962600062.8, 5e-13),
    (3, 3.001287762162967, 0.0, 4556940.4, 3e-9),
    (4, 3.000000013572103, 0.0, 687859583.9, 7e-16),
    (5, 3.0, 0.0, 33.9, 7e-16),
    (6, 3.002451613695432, 0.0, 34.1, 0.007),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;

    #[test]
    fn shapes_and_spot_entries() {
        let a = grid20();
        assert_eq!(a.shape(), (20, 20));
        assert_eq!(a[(16, 0)], C64::new(6.0, 0.0));
        assert_eq!(a[(8, 6)], C64::new(-10.0, 0.0));
        assert_eq!(jbite_a()[(4, 1)], C64::new(-10000.0, 0.0));
        assert_eq!(example4()[(0, 0)], C64::new(3.006, 0.0));
        assert_eq!(matrix_b()[(7, 7)], C64::new(2.0000133696815, 0.0));
        let d = &jbite_a_perturbed() - &jbite_a();
        assert!((d[(0, 0)].re + 0.092e-5).abs() < 1e-15 * jbite_a()[(0, 0)].norm().max(1.0));
    }

    #[test]
    fn grid20_trace_matches_spectrum() {
        // Eigenvalues 2 (x10) and 3 (x10).
        let tr: C64 = grid20().diagonal().iter().sum();
        assert_eq!(tr, C64::new(50.0, 0.0));
    }

    #[test]
    fn jbite_a_minus_two_has_rank_four() {
        let sv = singular_values(&jbite_a().shift_diagonal(C64::new(2.0, 0.0)));
        assert!(sv[3] > 1e-2);
        assert!(sv[4] < 1e-12);
    }
}
