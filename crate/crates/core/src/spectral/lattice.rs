use super::GridSpec;

/// A frequency vector; entries beyond the grid dimension are zero.
pub type Xi = [f64; 3];

/// The lattice `ξ = (π/L) m`, `m ∈ [-N/2, N/2)ⁿ`, enumerated in FFT order.
#[derive(Debug, Clone)]
pub struct FrequencyLattice {
    grid: GridSpec,
    modes: Vec<[i64; 3]>,
    xi: Vec<Xi>,
}

/// Builds the frequency lattice of `grid`.
pub fn frequency_lattice(grid: &GridSpec) -> FrequencyLattice {
    FrequencyLattice::new(grid)
}

impl FrequencyLattice {
    pub fn new(grid: &GridSpec) -> Self {
        let n = grid.points_per_axis();
        let dim = grid.dim();
        let count = grid.node_count();
        let dxi = grid.dxi();
        let mut modes = Vec::with_capacity(count);
        let mut xi = Vec::with_capacity(count);
        for index in 0..count {
            let mut m = [0i64; 3];
            let mut rest = index;
            for axis in (0..dim).rev() {
                let k = (rest % n) as i64;
                m[axis] = if k < (n / 2) as i64 { k } else { k - n as i64 };
                rest /= n;
            }
            modes.push(m);
            xi.push([m[0] as f64 * dxi, m[1] as f64 * dxi, m[2] as f64 * dxi]);
        }
        FrequencyLattice {
            grid: *grid,
            modes,
            xi,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Integer multi-index of mode `index`.
    pub fn mode(&self, index: usize) -> [i64; 3] {
        self.modes[index]
    }

    /// Frequency vector of mode `index`.
    pub fn xi(&self, index: usize) -> Xi {
        self.xi[index]
    }

    pub fn xis(&self) -> &[Xi] {
        &self.xi
    }

    /// `ξ = (π/L) m` for an arbitrary multi-index.
    pub fn xi_of(&self, m: [i64; 3]) -> Xi {
        let dxi = self.grid.dxi();
        [m[0] as f64 * dxi, m[1] as f64 * dxi, m[2] as f64 * dxi]
    }

    /// Flat index of multi-index `m` (each entry in `[-N/2, N/2)`).
    pub fn index_of(&self, m: [i64; 3]) -> usize {
        let n = self.grid.points_per_axis() as i64;
        (0..self.grid.dim()).fold(0usize, |acc, axis| {
            acc * n as usize + m[axis].rem_euclid(n) as usize
        })
    }

    /// The zero mode sits at flat index 0.
    pub fn zero_index(&self) -> usize {
        0
    }

    /// `|ξ|` of mode `index`.
    pub fn norm(&self, index: usize) -> f64 {
        let x = self.xi[index];
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.len()).map(|i| self.norm(i)).fold(0.0, f64::max)
    }

    /// Nyquist bound `(π/L)(N/2)√n`.
    pub fn nyquist_bound(&self) -> f64 {
        self.grid.dxi() * (self.grid.points_per_axis() / 2) as f64 * (self.grid.dim() as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn one_dimensional_unit_spacing() {
        let g = GridSpec::new(1, 8, PI, 2, 1.0).unwrap();
        let lat = frequency_lattice(&g);
        let mut ms: Vec<i64> = (0..lat.len()).map(|i| lat.mode(i)[0]).collect();
        ms.sort();
        assert_eq!(ms, vec![-4, -3, -2, -1, 0, 1, 2, 3]);
        let mut xs: Vec<f64> = (0..lat.len()).map(|i| lat.xi(i)[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn zero_mode_is_unique() {
        let g = GridSpec::new(2, 8, 2.0, 2, 1.0).unwrap();
        let lat = frequency_lattice(&g);
        let zeros = (0..lat.len()).filter(|&i| lat.mode(i) == [0, 0, 0]).count();
        assert_eq!(zeros, 1);
        assert_eq!(lat.mode(lat.zero_index()), [0, 0, 0]);
    }

    #[test]
    fn nyquist_arithmetic() {
        let g = GridSpec::new(2, 8, 3.0, 2, 1.0).unwrap();
        let lat = frequency_lattice(&g.with_points_per_axis(8).unwrap());
        assert_eq!(lat.len(), 64);
        // N = 4 is below the minimum grid size; the corner mode (-N/2, -N/2)
        // attains the bound on every grid.
        let bound = lat.nyquist_bound();
        assert!((lat.max_norm() - bound).abs() < 1e-12);
        assert!((bound - (PI / 3.0) * 4.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn index_round_trip() {
        let g = GridSpec::new(3, 8, 1.0, 2, 1.0).unwrap();
        let lat = frequency_lattice(&g);
        for i in 0..lat.len() {
            assert_eq!(lat.index_of(lat.mode(i)), i);
        }
    }
}
