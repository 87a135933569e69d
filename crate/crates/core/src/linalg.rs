//! Fixed-size dense helpers for 4×4 symmetric matrices and 4-vectors.

// Index loops mirror the matrix algebra more closely than iterator chains.
#![allow(clippy::needless_range_loop)]

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

pub fn dot(u: &Vec4, v: &Vec4) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &Vec4) -> f64 {
    dot(u, u).sqrt()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(m: &Mat4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = m`, together with the
/// leading principal minors of `m`. Returns the index of the first minor that
/// is not above `floor` as the error.
pub fn cholesky4(m: &Mat4, floor: f64) -> Result<(Mat4, [f64; 4]), (usize, f64)> {
    let mut l = [[0.0; 4]; 4];
    let mut minors = [0.0; 4];
    let mut running = 1.0;
    for j in 0..4 {
        let mut d = m[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        running *= d;
        minors[j] = running;
        if running <= floor || d <= 0.0 {
            return Err((j, running));
        }
        let ljj = d.sqrt();
        l[j][j] = ljj;
        for i in j + 1..4 {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / ljj;
        }
    }
    Ok((l, minors))
}

/// Generalized cross product: the vector orthogonal to `u`, `v`, `w` whose
/// components are the signed 3×3 cofactors of the matrix with rows `u, v, w`.
pub fn cross3(u: &Vec4, v: &Vec4, w: &Vec4) -> Vec4 {
    let minor = |i: usize, j: usize, k: usize| {
        u[i] * (v[j] * w[k] - v[k] * w[j]) - u[j] * (v[i] * w[k] - v[k] * w[i])
            + u[k] * (v[i] * w[j] - v[j] * w[i])
    };
    [
        minor(1, 2, 3),
        -minor(0, 2, 3),
        minor(0, 1, 3),
        -minor(0, 1, 2),
    ]
}
