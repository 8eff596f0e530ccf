use super::KerrError;
use serde::Serialize;

/// Real scalar samples on a rectilinear grid, x index fastest. Node (i, j, k)
/// sits at origin + (i dx, j dy, k dz). Sampling is trilinear inside the
/// bounding box and zero outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarField3D {
    dims: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    #[serde(skip)]
    values: Vec<f64>,
}

impl ScalarField3D {
    pub fn new(dims: [usize; 3], spacing: [f64; 3], origin: [f64; 3], values: Vec<f64>) -> Result<Self, KerrError> {
        if dims.contains(&0) {
            return Err(KerrError::InvalidField(format!("dimensions must be positive (got {dims:?})")));
        }
        if spacing.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
            return Err(KerrError::InvalidField(format!("spacing must be positive (got {spacing:?})")));
        }
        if origin.iter().any(|x| !x.is_finite()) {
            return Err(KerrError::InvalidField(format!("origin must be finite (got {origin:?})")));
        }
        let len = dims[0]
            .checked_mul(dims[1])
            .and_then(|n| n.checked_mul(dims[2]))
            .ok_or_else(|| KerrError::InvalidField("grid too large".into()))?;
        if values.len() != len {
            return Err(KerrError::InvalidField(format!(
                "expected {len} values for dims {dims:?}, got {}",
                values.len()
            )));
        }
        if let Some(p) = values.iter().position(|v| !v.is_finite()) {
            return Err(KerrError::InvalidField(format!("non-finite value at flat index {p}")));
        }
        Ok(Self { dims, spacing, origin, values })
    }

    /// Samples `f(x, y, z)` at every node.
    pub fn from_fn(
        dims: [usize; 3],
        spacing: [f64; 3],
        origin: [f64; 3],
        f: impl Fn([f64; 3]) -> f64,
    ) -> Result<Self, KerrError> {
        let mut values = Vec::with_capacity(dims.iter().product());
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    values.push(f([
                        origin[0] + i as f64 * spacing[0],
                        origin[1] + j as f64 * spacing[1],
                        origin[2] + k as f64 * spacing[2],
                    ]));
                }
            }
        }
        Self::new(dims, spacing, origin, values)
    }

    /// A field with the same geometry holding `value` everywhere.
    pub fn constant_like(&self, value: f64) -> Result<Self, KerrError> {
        Self::new(self.dims, self.spacing, self.origin, vec![value; self.values.len()])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn flat_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.flat_index(i, j, k)]
    }

    pub fn node_position(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.origin[0] + i as f64 * self.spacing[0],
            self.origin[1] + j as f64 * self.spacing[1],
            self.origin[2] + k as f64 * self.spacing[2],
        ]
    }

    /// Upper corner of the bounding box.
    pub fn upper(&self) -> [f64; 3] {
        let mut u = self.origin;
        for a in 0..3 {
            u[a] += (self.dims[a] - 1) as f64 * self.spacing[a];
        }
        u
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// Same dims, spacing and origin (within a relative 1e-12 of the spacing).
    pub fn is_congruent(&self, other: &Self) -> bool {
        self.dims == other.dims
            && (0..3).all(|a| {
                let tol = 1e-12 * self.spacing[a];
                (self.spacing[a] - other.spacing[a]).abs() <= tol && (self.origin[a] - other.origin[a]).abs() <= tol
            })
    }

    /// Every second node along each axis, keeping the origin.
    pub fn coarsened(&self) -> Result<Self, KerrError> {
        let dims = self.dims.map(|n| n.div_ceil(2));
        let spacing = self.spacing.map(|h| 2.0 * h);
        let mut values = Vec::with_capacity(dims.iter().product());
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    values.push(self.at(2 * i, 2 * j, 2 * k));
                }
            }
        }
        Self::new(dims, spacing, self.origin, values)
    }

    /// Trilinear interpolation at `p`; zero outside the bounding box.
    pub fn sample(&self, p: [f64; 3]) -> f64 {
        let mut base = [0usize; 3];
        let mut frac = [0f64; 3];
        for a in 0..3 {
            let s = (p[a] - self.origin[a]) / self.spacing[a];
            let last = (self.dims[a] - 1) as f64;
            // tolerate round-off right at the faces
            let eps = 1e-9;
            if !(s >= -eps && s <= last + eps) {
                return 0.0;
            }
            let s = s.clamp(0.0, last);
            let mut i = s.floor() as usize;
            if i + 1 >= self.dims[a] {
                i = self.dims[a].saturating_sub(2);
            }
            base[a] = i;
            frac[a] = if self.dims[a] == 1 { 0.0 } else { s - i as f64 };
        }
        let mut acc = 0.0;
        for corner in 0..8 {
            let off = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
            let mut w = 1.0;
            let mut idx = [0usize; 3];
            for a in 0..3 {
                w *= if off[a] == 1 { frac[a] } else { 1.0 - frac[a] };
                idx[a] = (base[a] + off[a]).min(self.dims[a] - 1);
            }
            if w != 0.0 {
                acc += w * self.at(idx[0], idx[1], idx[2]);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear() -> ScalarField3D {
        ScalarField3D::from_fn([4, 3, 5], [0.5, 1.0, 0.25], [-1.0, 0.0, 2.0], |[x, y, z]| 1.0 + 2.0 * x - y + 3.0 * z).unwrap()
    }

    #[test]
    fn trilinear_reproduces_linear_functions() {
        let f = linear();
        for p in [[-0.7, 0.3, 2.1], [0.4, 1.9, 2.9], [-1.0, 0.0, 2.0], [0.5, 2.0, 3.0]] {
            let exact = 1.0 + 2.0 * p[0] - p[1] + 3.0 * p[2];
            assert!((f.sample(p) - exact).abs() < 1e-12, "{p:?}");
        }
        assert_eq!(f.sample([0.6, 1.0, 2.5]), 0.0);
        assert_eq!(f.sample([-1.2, 1.0, 2.5]), 0.0);
    }

    #[test]
    fn node_values_are_exact() {
        let f = linear();
        assert_eq!(f.sample(f.node_position(2, 1, 3)), f.at(2, 1, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ScalarField3D::new([2, 2, 2], [1.0; 3], [0.0; 3], vec![0.0; 7]).is_err());
        assert!(ScalarField3D::new([2, 2, 2], [0.0, 1.0, 1.0], [0.0; 3], vec![0.0; 8]).is_err());
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(ScalarField3D::new([2, 2, 2], [1.0; 3], [0.0; 3], v).is_err());
    }

    #[test]
    fn coarsening_keeps_even_nodes() {
        let f = linear();
        let c = f.coarsened().unwrap();
        assert_eq!(c.dims(), [2, 2, 3]);
        assert_eq!(c.at(1, 1, 2), f.at(2, 2, 4));
    }
}
