use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of D2D pairs to cellular resources. Each pair reuses at most
/// one resource; a resource may carry any number of pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Allocation {
    num_resources: usize,
    assignment: Vec<Option<usize>>,
}

impl Allocation {
    /// An allocation with every pair unassigned.
    pub fn empty(num_d2d: usize, num_resources: usize) -> Self {
        Self {
            num_resources,
            assignment: vec![None; num_d2d],
        }
    }

    /// A complete allocation from a resource index per pair.
    pub fn from_vec(resources: &[usize], num_resources: usize) -> Result<Self> {
        let mut alloc = Self::empty(resources.len(), num_resources);
        for (pair, &c) in resources.iter().enumerate() {
            alloc.assign(pair, c)?;
        }
        Ok(alloc)
    }

    pub fn num_d2d(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_resources(&self) -> usize {
        self.num_resources
    }

    pub fn resource_of(&self, pair: usize) -> Option<usize> {
        self.assignment.get(pair).copied().flatten()
    }

    pub fn is_assigned(&self, pair: usize) -> bool {
        self.resource_of(pair).is_some()
    }

    pub fn assign(&mut self, pair: usize, resource: usize) -> Result<()> {
        if pair >= self.assignment.len() {
            return Err(Error::Usage(format!(
                "pair index {pair} out of range (D = {})",
                self.assignment.len()
            )));
        }
        if resource >= self.num_resources {
            return Err(Error::Usage(format!(
                "resource index {resource} out of range (C = {})",
                self.num_resources
            )));
        }
        if let Some(prev) = self.assignment[pair] {
            return Err(Error::Usage(format!(
                "pair {pair} is already assigned to resource {prev}"
            )));
        }
        self.assignment[pair] = Some(resource);
        Ok(())
    }

    /// Removes a pair from its resource, returning the resource it held.
    pub fn unassign(&mut self, pair: usize) -> Option<usize> {
        self.assignment.get_mut(pair).and_then(Option::take)
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn unassigned(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_none())
            .map(|(d, _)| d)
    }

    /// Pairs reusing `resource`, in ascending index order.
    pub fn pairs_on(&self, resource: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, r)| **r == Some(resource))
            .map(|(d, _)| d)
    }

    pub fn assignments(&self) -> &[Option<usize>] {
        &self.assignment
    }
}
