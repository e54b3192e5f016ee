//! Operation tallies for the criteria. Criteria are generic over [`OpTally`];
//! ordinary calls pass [`NoTally`], whose methods compile to nothing.

use serde::{Deserialize, Serialize};

pub trait OpTally {
    fn mul(&mut self, count: u64);
    fn add(&mut self, count: u64);
    fn cmp(&mut self, count: u64);
}

#[derive(Debug, Default, Clone, Copy)]
pub struct NoTally;

impl OpTally for NoTally {
    #[inline(always)]
    fn mul(&mut self, _: u64) {}
    #[inline(always)]
    fn add(&mut self, _: u64) {}
    #[inline(always)]
    fn cmp(&mut self, _: u64) {}
}

/// Complex multiplications (divisions count as multiplications), complex
/// additions/subtractions, and magnitude comparisons.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub mul: u64,
    pub add: u64,
    pub cmp: u64,
}

impl OpCounters {
    pub fn total(&self) -> u64 {
        self.mul + self.add + self.cmp
    }
}

impl OpTally for OpCounters {
    fn mul(&mut self, count: u64) {
        self.mul += count;
    }
    fn add(&mut self, count: u64) {
        self.add += count;
    }
    fn cmp(&mut self, count: u64) {
        self.cmp += count;
    }
}
