//! Finite d-dimensional windows of the hypercubic lattice.
//!
//! Sites are indexed row-major (dimension 0 slowest). Undirected bonds are
//! enumerated site by site in the positive direction of each axis, so each
//! adjacent pair appears exactly once; directed bonds are the two
//! orientations of each undirected bond, at indices `2*b` and `2*b + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Free,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    sides: Vec<usize>,
    strides: Vec<usize>,
    boundary: Boundary,
    n_sites: usize,
    /// Undirected bonds as (site, site) pairs, in enumeration order.
    bonds: Vec<(usize, usize)>,
    /// Neighbor lists per site (distinct sites).
    neighbors: Vec<Vec<usize>>,
}

impl Lattice {
    /// Build a window with the given side lengths and boundary mode.
    ///
    /// Periodic windows need every side >= 3 so that the 2d neighbors of a
    /// site stay distinct.
    pub fn new(sides: &[usize], boundary: Boundary) -> Result<Self> {
        if sides.is_empty() || sides.iter().any(|&s| s == 0) {
            return Err(Error::InvalidSides(sides.to_vec()));
        }
        if boundary == Boundary::Periodic && sides.iter().any(|&s| s < 3) {
            return Err(Error::PeriodicSideTooShort(sides.to_vec()));
        }
        let d = sides.len();
        let n_sites: usize = sides.iter().product();
        let mut strides = vec![1; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sides[i + 1];
        }

        let mut lat = Lattice {
            sides: sides.to_vec(),
            strides,
            boundary,
            n_sites,
            bonds: Vec::new(),
            neighbors: vec![Vec::new(); n_sites],
        };
        for site in 0..n_sites {
            let coords = lat.coords_of(site);
            for axis in 0..d {
                if let Some(fwd) = lat.step(&coords, axis) {
                    lat.bonds.push((site, fwd));
                    lat.neighbors[site].push(fwd);
                    lat.neighbors[fwd].push(site);
                }
            }
        }
        Ok(lat)
    }

    /// 1D ring of length `len` (periodic).
    pub fn ring(len: usize) -> Result<Self> {
        Self::new(&[len], Boundary::Periodic)
    }

    /// 1D open chain of length `len`.
    pub fn chain(len: usize) -> Result<Self> {
        Self::new(&[len], Boundary::Free)
    }

    /// 2D `len` x `len` window with free boundary (for crossing experiments).
    pub fn square_free(len: usize) -> Result<Self> {
        Self::new(&[len, len], Boundary::Free)
    }

    fn step(&self, coords: &[usize], axis: usize) -> Option<usize> {
        let side = self.sides[axis];
        let next = match self.boundary {
            Boundary::Periodic => (coords[axis] + 1) % side,
            Boundary::Free => {
                if coords[axis] + 1 >= side {
                    return None;
                }
                coords[axis] + 1
            }
        };
        let mut c = coords.to_vec();
        c[axis] = next;
        Some(self.index_of(&c))
    }

    pub fn dims(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn num_sites(&self) -> usize {
        self.n_sites
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn num_directed_bonds(&self) -> usize {
        2 * self.bonds.len()
    }

    /// Undirected bonds in enumeration order.
    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    /// Endpoints of a directed bond: index `2b` is `bonds[b]` forward,
    /// `2b + 1` is the reverse orientation.
    pub fn directed_bond(&self, dbond: usize) -> (usize, usize) {
        let (u, v) = self.bonds[dbond / 2];
        if dbond % 2 == 0 {
            (u, v)
        } else {
            (v, u)
        }
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dims());
        coords
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| c * s)
            .sum()
    }

    pub fn coords_of(&self, site: usize) -> Vec<usize> {
        debug_assert!(site < self.n_sites);
        self.strides
            .iter()
            .zip(&self.sides)
            .map(|(stride, side)| site / stride % side)
            .collect()
    }

    /// Distinct adjacent sites of `site` under the boundary mode.
    pub fn neighbors(&self, site: usize) -> Result<&[usize]> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(&self.neighbors[site])
    }

    /// Sites on the `coord == 0` face of the given axis.
    pub fn low_face(&self, axis: usize) -> Vec<usize> {
        self.face(axis, 0)
    }

    /// Sites on the `coord == side - 1` face of the given axis.
    pub fn high_face(&self, axis: usize) -> Vec<usize> {
        self.face(axis, self.sides[axis] - 1)
    }

    fn face(&self, axis: usize, value: usize) -> Vec<usize> {
        (0..self.n_sites)
            .filter(|&s| s / self.strides[axis] % self.sides[axis] == value)
            .collect()
    }

    /// Site at the geometric center (used to seed growth experiments).
    pub fn center_site(&self) -> usize {
        let coords: Vec<usize> = self.sides.iter().map(|&s| s / 2).collect();
        self.index_of(&coords)
    }
}
