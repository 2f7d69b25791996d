pub type RMat2 = [[f64; 2]; 2];

/// c = o1 · diag(d) · o2ᵀ
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Svd2 {
    pub o1: RMat2,
    pub d: [f64; 2],
    pub o2: RMat2,
}

pub fn rotation(angle: f64) -> RMat2 {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

pub fn mat2_mul(a: &RMat2, b: &RMat2) -> RMat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_transpose(a: &RMat2) -> RMat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

impl Svd2 {
    pub fn reconstruct(&self) -> RMat2 {
        let d = [[self.d[0], 0.0], [0.0, self.d[1]]];
        mat2_mul(&mat2_mul(&self.o1, &d), &mat2_transpose(&self.o2))
    }
}

/// Closed-form SVD of a real 2×2 matrix.
///
/// Writes c = R(φ)·diag(s₁, s₂)·R(θ) with s₁ ≥ |s₂|. When det c < 0 the
/// second value comes out negative; it is made non-negative by letting `o2`
/// carry the reflection diag(1, −1). Otherwise both factors are rotations.
pub fn svd2_real(c: &RMat2) -> Svd2 {
    let [[a, b], [cc, d]] = *c;
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (cc + b);
    let h = 0.5 * (cc - b);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let s1 = q + r;
    let s2 = q - r;
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);

    let o1 = rotation(phi);
    // c = o1·diag(s1, s2)·R(θ), so o2 = R(θ)ᵀ = R(−θ)
    let mut o2 = rotation(-theta);
    let mut d2 = s2;
    if s2 < 0.0 {
        d2 = -s2;
        o2[0][1] = -o2[0][1];
        o2[1][1] = -o2[1][1];
    }
    Svd2 {
        o1,
        d: [s1, d2],
        o2,
    }
}
