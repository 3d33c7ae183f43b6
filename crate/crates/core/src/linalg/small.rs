//! Fixed-size 3-vector and 3×3 matrix helpers used by the element kernels.

pub type Vec3 = [f64; 3];
/// Row-major: `m[i][j]` is row `i`, column `j`.
pub type Mat3 = [[f64; 3]; 3];

pub const ZERO3: Vec3 = [0.0; 3];
pub const ZERO33: Mat3 = [[0.0; 3]; 3];

#[inline]
pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(s: f64, a: &Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn normalized(a: &Vec3) -> Vec3 {
    scale(1.0 / norm(a), a)
}

/// Outer product `a ⊗ b`, i.e. `m[i][j] = a[i] * b[j]`.
#[inline]
pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
    let mut m = ZERO33;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

#[inline]
pub fn mat_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += b[i][j];
        }
    }
    m
}

#[inline]
pub fn mat_sub(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] -= b[i][j];
        }
    }
    m
}

#[inline]
pub fn mat_scale(s: f64, a: &Mat3) -> Mat3 {
    let mut m = *a;
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    m
}

#[inline]
pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

#[inline]
pub fn frobenius_dot(a: &Mat3, b: &Mat3) -> f64 {
    (0..3).map(|i| dot(&a[i], &b[i])).sum()
}

#[inline]
pub fn trace(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

/// Curl of a vector field read off its Jacobian `J[i][j] = ∂v_i/∂x_j`.
#[inline]
pub fn curl_of(j: &Mat3) -> Vec3 {
    [j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]]
}

pub fn det(m: &Mat3) -> f64 {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Inverse of a 3×3 matrix, `None` if it is numerically singular relative to
/// the scale of its rows.
pub fn inverse(m: &Mat3) -> Option<Mat3> {
    let d = det(m);
    let scale = norm(&m[0]) * norm(&m[1]) * norm(&m[2]);
    if scale == 0.0 || d.abs() <= 1e-14 * scale {
        return None;
    }
    // Columns of the inverse are cross products of rows, divided by det.
    let c0 = cross(&m[1], &m[2]);
    let c1 = cross(&m[2], &m[0]);
    let c2 = cross(&m[0], &m[1]);
    let mut inv = ZERO33;
    for i in 0..3 {
        inv[i][0] = c0[i] / d;
        inv[i][1] = c1[i] / d;
        inv[i][2] = c2[i] / d;
    }
    Some(inv)
}

/// Positive definiteness of a symmetric 3×3 matrix by leading minors.
pub fn is_spd(m: &Mat3) -> bool {
    let sym =
        (0..3).all(|i| (0..3).all(|j| (m[i][j] - m[j][i]).abs() <= 1e-12 * (m[i][j].abs() + m[j][i].abs() + 1.0)));
    let m1 = m[0][0];
    let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    sym && m1 > 0.0 && m2 > 0.0 && det(m) > 0.0
}
