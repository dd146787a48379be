use serde::{Deserialize, Serialize};

/// Ladder operator kind. The sign convention is `+1` for annihilation and
/// `-1` for creation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ladder {
    Create,
    Annihilate,
}

impl Ladder {
    pub fn sign(self) -> i32 {
        match self {
            Ladder::Annihilate => 1,
            Ladder::Create => -1,
        }
    }

    pub fn from_sign(sign: i32) -> Self {
        if sign > 0 {
            Ladder::Annihilate
        } else {
            Ladder::Create
        }
    }

    pub fn dagger(self) -> Self {
        match self {
            Ladder::Create => Ladder::Annihilate,
            Ladder::Annihilate => Ladder::Create,
        }
    }
}

/// `b_{s0}^{(o0)} b_{s1}^{(o1)} b_{s2}^{(o2)} b_{s3}^{(o3)}`, read left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OperatorTuple {
    pub sites: [usize; 4],
    pub ops: [Ladder; 4],
}

pub const DENSITY_PATTERN: [Ladder; 4] = [
    Ladder::Create,
    Ladder::Annihilate,
    Ladder::Create,
    Ladder::Annihilate,
];

impl OperatorTuple {
    pub fn new(sites: [usize; 4], ops: [Ladder; 4]) -> Self {
        OperatorTuple { sites, ops }
    }

    /// `<b_n† b_m b_l† b_j>`, the string entering the noise correlations.
    pub fn density_pair(n: usize, m: usize, l: usize, j: usize) -> Self {
        OperatorTuple {
            sites: [n, m, l, j],
            ops: DENSITY_PATTERN,
        }
    }

    pub fn from_signs(sites: [usize; 4], signs: [i32; 4]) -> Self {
        OperatorTuple {
            sites,
            ops: signs.map(Ladder::from_sign),
        }
    }

    pub fn signs(&self) -> [i32; 4] {
        self.ops.map(Ladder::sign)
    }

    /// Equal numbers of creations and annihilations.
    pub fn conserves_number(&self) -> bool {
        self.signs().iter().sum::<i32>() == 0
    }

    /// Hermitian conjugate: reversed order, every operator daggered.
    pub fn adjoint(&self) -> Self {
        let [s0, s1, s2, s3] = self.sites;
        let [o0, o1, o2, o3] = self.ops;
        OperatorTuple {
            sites: [s3, s2, s1, s0],
            ops: [o3.dagger(), o2.dagger(), o1.dagger(), o0.dagger()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pattern {
    /// `a < b < c < d`
    AllDistinct,
    /// `a = b < c < d`
    PairLeft,
    /// `a < b = c < d`
    PairMid,
    /// `a < b < c = d`
    PairRight,
    /// `a = b < c = d`
    TwoPairs,
    /// `a = b = c < d` or `a < b = c = d`
    Triple,
    /// `a = b = c = d`
    Quad,
}

/// A tuple after the stable sort by site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedCase {
    pub pattern: Pattern,
    pub sites: [usize; 4],
    pub ops: [Ladder; 4],
}

impl OrderedCase {
    pub fn signs(&self) -> [i32; 4] {
        self.ops.map(Ladder::sign)
    }

    /// Contains `b_x b_x†` as adjacent operators, the only place where
    /// bosonic and spin-1/2 evaluation can differ.
    pub fn has_virtual_pair(&self) -> bool {
        (0..3).any(|k| {
            self.sites[k] == self.sites[k + 1]
                && self.ops[k] == Ladder::Annihilate
                && self.ops[k + 1] == Ladder::Create
        })
    }
}

/// Stable sort by site. Operators on different sites commute, so no sign
/// arises; operators on the same site keep their relative order.
pub fn site_order(tuple: &OperatorTuple) -> OrderedCase {
    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by_key(|&k| tuple.sites[k]);
    let sites = idx.map(|k| tuple.sites[k]);
    let ops = idx.map(|k| tuple.ops[k]);
    let [a, b, c, d] = sites;
    let pattern = match (a == b, b == c, c == d) {
        (false, false, false) => Pattern::AllDistinct,
        (true, false, false) => Pattern::PairLeft,
        (false, true, false) => Pattern::PairMid,
        (false, false, true) => Pattern::PairRight,
        (true, false, true) => Pattern::TwoPairs,
        (true, true, false) | (false, true, true) => Pattern::Triple,
        (true, true, true) => Pattern::Quad,
    };
    OrderedCase {
        pattern,
        sites,
        ops,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let c = site_order(&OperatorTuple::density_pair(5, 2, 3, 3));
        assert_eq!(c.sites, [2, 3, 3, 5]);
        assert_eq!(c.signs(), [1, -1, 1, -1]);
        assert_eq!(c.pattern, Pattern::PairMid);

        let c = site_order(&OperatorTuple::density_pair(1, 1, 2, 3));
        assert_eq!(c.pattern, Pattern::PairLeft);
        assert_eq!(&c.signs()[..2], &[-1, 1]);

        assert_eq!(
            site_order(&OperatorTuple::density_pair(4, 4, 4, 4)).pattern,
            Pattern::Quad
        );
        assert_eq!(
            site_order(&OperatorTuple::density_pair(0, 3, 3, 0)).pattern,
            Pattern::TwoPairs
        );
        assert_eq!(
            site_order(&OperatorTuple::density_pair(2, 2, 2, 0)).pattern,
            Pattern::Triple
        );
    }

    #[test]
    fn virtual_pairs() {
        assert!(site_order(&OperatorTuple::density_pair(0, 1, 1, 0)).has_virtual_pair());
        assert!(!site_order(&OperatorTuple::density_pair(1, 1, 0, 0)).has_virtual_pair());
        assert!(!site_order(&OperatorTuple::density_pair(0, 1, 2, 3)).has_virtual_pair());
        // b_0 b_1 b_0† b_1† sorts to b_0 b_0† b_1 b_1†
        let t = OperatorTuple::from_signs([0, 1, 0, 1], [1, 1, -1, -1]);
        assert!(site_order(&t).has_virtual_pair());
    }

    #[test]
    fn adjoint_of_density_pair() {
        let t = OperatorTuple::density_pair(1, 2, 3, 4);
        assert_eq!(t.adjoint(), OperatorTuple::density_pair(4, 3, 2, 1));
        assert_eq!(t.adjoint().adjoint(), t);
    }

    proptest! {
        #[test]
        fn ordering_is_stable_and_exhaustive(sites in proptest::array::uniform4(0usize..5), signs in proptest::array::uniform4(prop_oneof![Just(-1i32), Just(1)])) {
            let t = OperatorTuple::from_signs(sites, signs);
            let c = site_order(&t);
            prop_assert!(c.sites.windows(2).all(|w| w[0] <= w[1]));
            // same-site operators appear in their original order
            for s in 0..5 {
                let before: Vec<Ladder> = (0..4).filter(|&k| t.sites[k] == s).map(|k| t.ops[k]).collect();
                let after: Vec<Ladder> = (0..4).filter(|&k| c.sites[k] == s).map(|k| c.ops[k]).collect();
                prop_assert_eq!(before, after);
            }
            let distinct = {
                let mut v = sites.to_vec();
                v.sort();
                v.dedup();
                v.len()
            };
            let expected = match c.pattern {
                Pattern::AllDistinct => 4,
                Pattern::PairLeft | Pattern::PairMid | Pattern::PairRight => 3,
                Pattern::TwoPairs | Pattern::Triple => 2,
                Pattern::Quad => 1,
            };
            prop_assert_eq!(distinct, expected);
        }
    }
}
