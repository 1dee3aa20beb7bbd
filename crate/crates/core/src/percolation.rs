//! Bernoulli bond (and site) percolation on finite windows: sampling,
//! clustering, crossing probabilities, and a finite-size estimate of the
//! critical probability.

use rand::Rng;

use crate::bitset::{BondConfig, SpinConfig};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, Lattice};
use crate::rng::{ReplicaPlan, Stream, StreamPurpose};
use crate::stats::{
    critical_from_crossings, intersect_size_curves, validate_grid, CriticalEstimate, Estimate,
    SizedCurve, SweepResult,
};
use crate::union_find::UnionFind;

/// Connected-component labeling of a sample.
///
/// `label[site]` is a dense cluster id, ordered by the smallest site index
/// in each cluster; `None` marks sites outside the clustered set (vacant
/// sites in site mode). `sizes[id]` is the site count of cluster `id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabeling {
    pub label: Vec<Option<usize>>,
    pub sizes: Vec<usize>,
}

impl ClusterLabeling {
    pub fn num_clusters(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest_cluster(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

/// One uniform variate per bond, in bond-enumeration order. Thresholding
/// the same variates at different p gives the standard monotone coupling.
pub fn sample_bond_uniforms(lattice: &Lattice, stream: &mut Stream) -> Vec<f64> {
    (0..lattice.num_bonds()).map(|_| stream.random()).collect()
}

/// Open exactly the bonds whose shared variate falls below p.
pub fn bonds_from_uniforms(lattice: &Lattice, uniforms: &[f64], p: f64) -> Result<BondConfig> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if uniforms.len() != lattice.num_bonds() {
        return Err(Error::LatticeMismatch {
            object: "bond uniforms",
            got: uniforms.len(),
            expected: lattice.num_bonds(),
        });
    }
    let mut cfg = BondConfig::closed(lattice);
    for (b, &u) in uniforms.iter().enumerate() {
        if u < p {
            cfg.set_open(b, true);
        }
    }
    Ok(cfg)
}

/// Each undirected bond open independently with probability p.
pub fn sample_bonds(lattice: &Lattice, p: f64, stream: &mut Stream) -> Result<BondConfig> {
    let uniforms = sample_bond_uniforms(lattice, stream);
    bonds_from_uniforms(lattice, &uniforms, p)
}

fn union_open_bonds(lattice: &Lattice, bonds: &BondConfig) -> UnionFind {
    let mut uf = UnionFind::new(lattice.num_sites());
    for (b, &(u, v)) in lattice.bonds().iter().enumerate() {
        if bonds.is_open(b) {
            uf.union(u, v);
        }
    }
    uf
}

fn labeling_from_union_find(mut uf: UnionFind, members: &[usize], n_sites: usize) -> ClusterLabeling {
    let mut label = vec![None; n_sites];
    let mut id_of_root: Vec<Option<usize>> = vec![None; n_sites];
    let mut sizes = Vec::new();
    // scanning sites in order assigns ids by smallest member site
    for &site in members {
        let root = uf.find(site);
        let id = match id_of_root[root] {
            Some(id) => id,
            None => {
                let id = sizes.len();
                id_of_root[root] = Some(id);
                sizes.push(0);
                id
            }
        };
        label[site] = Some(id);
        sizes[id] += 1;
    }
    ClusterLabeling { label, sizes }
}

/// Clusters of the open-bond subgraph. Every site belongs to a cluster
/// (isolated sites are singletons).
pub fn cluster(lattice: &Lattice, bonds: &BondConfig) -> Result<ClusterLabeling> {
    bonds.check_lattice(lattice, "bond configuration")?;
    let uf = union_open_bonds(lattice, bonds);
    let members: Vec<usize> = (0..lattice.num_sites()).collect();
    Ok(labeling_from_union_find(uf, &members, lattice.num_sites()))
}

/// Clusters of occupied sites under lattice adjacency (no diagonals).
pub fn site_cluster(lattice: &Lattice, occupied: &SpinConfig) -> Result<ClusterLabeling> {
    occupied.check_lattice(lattice, "occupancy")?;
    let mut uf = UnionFind::new(lattice.num_sites());
    for &(u, v) in lattice.bonds() {
        if occupied.get(u) && occupied.get(v) {
            uf.union(u, v);
        }
    }
    let members = occupied.occupied_sites();
    Ok(labeling_from_union_find(uf, &members, lattice.num_sites()))
}

/// Whether some open cluster touches both faces of the window along `axis`.
pub fn has_crossing(lattice: &Lattice, bonds: &BondConfig, axis: usize) -> Result<bool> {
    if axis >= lattice.dims() {
        return Err(Error::AxisOutOfRange {
            axis,
            dims: lattice.dims(),
        });
    }
    if lattice.boundary() == Boundary::Periodic {
        return Err(Error::PeriodicCrossing);
    }
    bonds.check_lattice(lattice, "bond configuration")?;
    let mut uf = union_open_bonds(lattice, bonds);
    let high = lattice.high_face(axis);
    for low_site in lattice.low_face(axis) {
        for &high_site in &high {
            if uf.same(low_site, high_site) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Monte Carlo crossing probability along axis 0.
pub fn crossing_probability(lattice: &Lattice, p: f64, plan: &ReplicaPlan) -> Result<Estimate> {
    let sweep = crossing_sweep(lattice, &[p], plan)?;
    Ok(sweep.estimates[0])
}

/// Crossing probability over a p-grid with shared variates per replica,
/// so the per-replica indicator is nondecreasing in p.
pub fn crossing_sweep(lattice: &Lattice, p_grid: &[f64], plan: &ReplicaPlan) -> Result<SweepResult> {
    validate_grid(p_grid)?;
    for &p in p_grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }
    if lattice.dims() != 2 || lattice.boundary() != Boundary::Free {
        return Err(Error::Precondition(
            "crossing experiments need a 2D free-boundary window".into(),
        ));
    }
    let counts = crossing_counts(lattice, p_grid, plan)?;
    let estimates = counts
        .into_iter()
        .map(|k| Estimate::from_indicator(k, plan.replicas))
        .collect();
    SweepResult::new(p_grid.to_vec(), estimates, *plan)
}

fn crossing_counts(lattice: &Lattice, p_grid: &[f64], plan: &ReplicaPlan) -> Result<Vec<u64>> {
    let per_replica: Vec<Vec<bool>> = plan.map_replicas(|i| {
        let mut stream = plan.stream(i, StreamPurpose::Bonds);
        let uniforms = sample_bond_uniforms(lattice, &mut stream);
        p_grid
            .iter()
            .map(|&p| {
                let bonds = bonds_from_uniforms(lattice, &uniforms, p).expect("validated p");
                has_crossing(lattice, &bonds, 0).expect("validated window")
            })
            .collect()
    });
    let mut counts = vec![0u64; p_grid.len()];
    for row in &per_replica {
        for (c, &hit) in counts.iter_mut().zip(row) {
            *c += hit as u64;
        }
    }
    Ok(counts)
}

/// Estimate the critical probability from crossings of crossing-probability
/// curves for successive window sizes.
pub fn estimate_pc(sizes: &[usize], p_grid: &[f64], plan: &ReplicaPlan) -> Result<CriticalEstimate> {
    if sizes.len() < 2 {
        return Err(Error::Precondition(
            "critical-point estimation needs at least two window sizes".into(),
        ));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("window sizes must be increasing".into()));
    }
    let mut curves = Vec::with_capacity(sizes.len());
    for &l in sizes {
        let lattice = Lattice::square_free(l)?;
        let sweep = crossing_sweep(&lattice, p_grid, plan)?;
        curves.push(SizedCurve { size: l, sweep });
    }
    let mut crossings = Vec::new();
    for pair in curves.windows(2) {
        crossings.push(intersect_size_curves(p_grid, &pair[0].sweep, &pair[1].sweep)?);
    }
    Ok(critical_from_crossings(p_grid, crossings, curves))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream() -> Stream {
        Stream::new(42, 0, StreamPurpose::Bonds)
    }

    #[test]
    fn degenerate_probabilities() {
        let lat = Lattice::square_free(4).unwrap();
        let closed = sample_bonds(&lat, 0.0, &mut stream()).unwrap();
        assert_eq!(closed.count_open(), 0);
        let open = sample_bonds(&lat, 1.0, &mut stream()).unwrap();
        assert_eq!(open.count_open(), lat.num_bonds());
        assert!(sample_bonds(&lat, 1.5, &mut stream()).is_err());
    }

    #[test]
    fn coupling_is_monotone_in_p() {
        let lat = Lattice::square_free(6).unwrap();
        let uniforms = sample_bond_uniforms(&lat, &mut stream());
        let mut prev = bonds_from_uniforms(&lat, &uniforms, 0.0).unwrap();
        for k in 1..=10 {
            let cur = bonds_from_uniforms(&lat, &uniforms, k as f64 / 10.0).unwrap();
            assert!(prev.dominated_by(&cur));
            prev = cur;
        }
    }

    #[test]
    fn cluster_trivial_cases() {
        let lat = Lattice::chain(3).unwrap();
        let closed = BondConfig::closed(&lat);
        let lab = cluster(&lat, &closed).unwrap();
        assert_eq!(lab.num_clusters(), 3);
        assert_eq!(lab.sizes, vec![1, 1, 1]);

        let open = BondConfig::all_open(&lat);
        let lab = cluster(&lat, &open).unwrap();
        assert_eq!(lab.num_clusters(), 1);
        assert_eq!(lab.sizes, vec![3]);

        // only bond (0,1) open on a 3-chain: clusters {0,1} and {2}
        let mut one = BondConfig::closed(&lat);
        let bond01 = lat.bonds().iter().position(|&b| b == (0, 1)).unwrap();
        one.set_open(bond01, true);
        let lab = cluster(&lat, &one).unwrap();
        assert_eq!(lab.label[0], lab.label[1]);
        assert_ne!(lab.label[0], lab.label[2]);
        assert_eq!(lab.sizes, vec![2, 1]);
    }

    #[test]
    fn cluster_sizes_sum_to_site_count() {
        let lat = Lattice::square_free(5).unwrap();
        let mut s = stream();
        for _ in 0..20 {
            let bonds = sample_bonds(&lat, 0.5, &mut s).unwrap();
            let lab = cluster(&lat, &bonds).unwrap();
            assert_eq!(lab.sizes.iter().sum::<usize>(), lat.num_sites());
            // cluster count + merge rank = N
            let uf = union_open_bonds(&lat, &bonds);
            assert_eq!(lab.num_clusters() + uf.merge_count(), lat.num_sites());
        }
    }

    #[test]
    fn labels_are_canonical() {
        // ids are assigned in order of each cluster's smallest site
        let lat = Lattice::square_free(4).unwrap();
        let bonds = sample_bonds(&lat, 0.4, &mut stream()).unwrap();
        let lab = cluster(&lat, &bonds).unwrap();
        let mut seen = 0;
        for site in 0..lat.num_sites() {
            let id = lab.label[site].unwrap();
            assert!(id <= seen);
            if id == seen {
                seen += 1;
            }
        }
    }

    #[test]
    fn crossing_trivial_cases() {
        let lat = Lattice::square_free(3).unwrap();
        assert!(has_crossing(&lat, &BondConfig::all_open(&lat), 0).unwrap());
        assert!(!has_crossing(&lat, &BondConfig::closed(&lat), 0).unwrap());
        assert!(has_crossing(&lat, &BondConfig::closed(&lat), 2).is_err());

        let ring = Lattice::new(&[4, 4], Boundary::Periodic).unwrap();
        assert!(matches!(
            has_crossing(&ring, &BondConfig::all_open(&ring), 0),
            Err(Error::PeriodicCrossing)
        ));
    }

    #[test]
    fn two_by_two_horizontal_bonds_cross() {
        // axis 0 runs across rows; the two bonds along axis 0 already span it
        let lat = Lattice::square_free(2).unwrap();
        let mut bonds = BondConfig::closed(&lat);
        for (b, &(u, v)) in lat.bonds().iter().enumerate() {
            let (cu, cv) = (lat.coords_of(u), lat.coords_of(v));
            if cu[0] != cv[0] {
                bonds.set_open(b, true);
            }
        }
        assert_eq!(bonds.count_open(), 2);
        assert!(has_crossing(&lat, &bonds, 0).unwrap());
        assert!(!has_crossing(&lat, &bonds, 1).unwrap());
    }

    #[test]
    fn crossing_probability_endpoints() {
        let lat = Lattice::square_free(3).unwrap();
        let plan = ReplicaPlan::new(5, 200);
        let zero = crossing_probability(&lat, 0.0, &plan).unwrap();
        assert_eq!((zero.mean, zero.std_error), (0.0, 0.0));
        let one = crossing_probability(&lat, 1.0, &plan).unwrap();
        assert_eq!((one.mean, one.std_error), (1.0, 0.0));
    }

    #[test]
    fn site_cluster_cases() {
        let lat = Lattice::square_free(4).unwrap();
        let empty = SpinConfig::empty(&lat);
        assert_eq!(site_cluster(&lat, &empty).unwrap().num_clusters(), 0);

        let full = SpinConfig::full(&lat);
        let lab = site_cluster(&lat, &full).unwrap();
        assert_eq!(lab.num_clusters(), 1);
        assert_eq!(lab.sizes, vec![lat.num_sites()]);

        // checkerboard: no two occupied sites adjacent
        let mut checker = SpinConfig::empty(&lat);
        for s in 0..lat.num_sites() {
            let c = lat.coords_of(s);
            if (c[0] + c[1]) % 2 == 0 {
                checker.set(s, true);
            }
        }
        let lab = site_cluster(&lat, &checker).unwrap();
        assert_eq!(lab.num_clusters(), checker.popcount());
        assert!(lab.sizes.iter().all(|&s| s == 1));
        assert_eq!(lab.sizes.iter().sum::<usize>(), checker.popcount());
    }

    #[test]
    fn estimate_pc_rejects_single_size() {
        let plan = ReplicaPlan::new(0, 10);
        assert!(estimate_pc(&[16], &[0.4, 0.5, 0.6], &plan).is_err());
    }

    #[test]
    fn replica_indicators_monotone_in_p() {
        let lat = Lattice::square_free(6).unwrap();
        let p_grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let plan = ReplicaPlan::new(3, 50);
        for i in 0..plan.replicas {
            let mut stream = plan.stream(i, StreamPurpose::Bonds);
            let uniforms = sample_bond_uniforms(&lat, &mut stream);
            let hits: Vec<bool> = p_grid
                .iter()
                .map(|&p| {
                    let bonds = bonds_from_uniforms(&lat, &uniforms, p).unwrap();
                    has_crossing(&lat, &bonds, 0).unwrap()
                })
                .collect();
            assert!(hits.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
