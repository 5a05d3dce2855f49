use super::{ExitArrow, Fanifold, Stratum};

/// Attaching step for one stratum `S` of dimension `k`: the torus factor is
/// read off `M_S`, `Σ_S`, and the handle is glued along the arrows into `S`
/// from lower strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleRecord {
    pub k: usize,
    pub stratum: Stratum,
    pub gluing: Vec<ExitArrow>,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    /// `levels[k]` is the full sub-fanifold on strata of dimension `≤ k`.
    pub levels: Vec<Fanifold>,
    /// Ordered by `k`, then stratum id.
    pub schedule: Vec<HandleRecord>,
}

impl Filtration {
    /// Rebuilds the fanifold from the handle schedule alone.
    pub fn replay(&self, dim: usize, closed: bool) -> Fanifold {
        let strata = self.schedule.iter().map(|r| r.stratum.clone()).collect();
        let arrows = self.schedule.iter().flat_map(|r| r.gluing.iter().cloned()).collect();
        Fanifold::new(dim, strata, arrows, closed).expect("records refer to replayed strata")
    }

    pub fn batch(&self, k: usize) -> impl Iterator<Item = &HandleRecord> + '_ {
        self.schedule.iter().filter(move |r| r.k == k)
    }
}

pub fn filtration(phi: &Fanifold) -> Filtration {
    let top = phi.strata().map(|s| s.dim).max().unwrap_or(0).max(phi.dim);
    let mut levels = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let strata: Vec<Stratum> = phi.strata().filter(|s| s.dim <= k).cloned().collect();
        let arrows: Vec<ExitArrow> = phi
            .arrows()
            .filter(|a| {
                let t = phi.stratum(&a.target).expect("known stratum");
                t.dim <= k
            })
            .cloned()
            .collect();
        let closed = phi.closed && k == top;
        levels.push(Fanifold::new(phi.dim, strata, arrows, closed).expect("sub-fanifold of a fanifold"));
    }

    let mut schedule: Vec<HandleRecord> = phi
        .strata()
        .map(|s| HandleRecord { k: s.dim, stratum: s.clone(), gluing: phi.arrows_into(&s.id).cloned().collect() })
        .collect();
    schedule.sort_by(|a, b| (a.k, &a.stratum.id).cmp(&(b.k, &b.stratum.id)));
    Filtration { levels, schedule }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fanifold::sphere_fanifold;

    #[test]
    fn p2_schedule() {
        let phi = sphere_fanifold(&corpus::p2()).unwrap();
        let f = filtration(&phi);
        assert_eq!(f.levels.len(), 2);
        assert_eq!(f.levels[0].num_strata(), 3);
        assert_eq!(f.levels[1], phi);
        let vertices: Vec<&HandleRecord> = f.batch(0).collect();
        assert_eq!(vertices.len(), 3);
        assert!(vertices.iter().all(|r| r.stratum.lattice_rank == 1 && r.gluing.is_empty()));
        let arcs: Vec<&HandleRecord> = f.batch(1).collect();
        assert_eq!(arcs.len(), 3);
        assert!(arcs.iter().all(|r| r.gluing.len() == 2));
        assert_eq!(f.replay(phi.dim, phi.closed), phi);
    }

    #[test]
    fn zero_dimensional_is_one_batch() {
        let phi = sphere_fanifold(&corpus::p1()).unwrap();
        let f = filtration(&phi);
        assert_eq!(f.levels.len(), 1);
        assert_eq!(f.schedule.len(), 2);
        assert!(f.schedule.iter().all(|r| r.k == 0));
    }

    #[test]
    fn p1xp1_schedule() {
        let phi = sphere_fanifold(&corpus::p1xp1()).unwrap();
        let f = filtration(&phi);
        assert_eq!(f.batch(0).count(), 4);
        assert_eq!(f.batch(1).count(), 4);
        assert!(f.batch(1).all(|r| r.gluing.len() == 2));
        assert_eq!(f.replay(phi.dim, phi.closed), phi);
    }
}
