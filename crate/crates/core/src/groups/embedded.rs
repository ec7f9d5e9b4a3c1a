use std::sync::Arc;

use super::group::{Elem, Group};
use super::subgroup::Subgroup;
use crate::error::Result;

/// A subgroup realised as a group of its own, with element maps both ways.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub subgroup: Subgroup,
    pub group: Arc<Group>,
    embedding: Vec<Elem>,
}

impl Embedded {
    pub fn new(subgroup: &Subgroup, name: impl Into<String>) -> Result<Embedded> {
        let (group, embedding) = subgroup.to_group(name)?;
        Ok(Embedded {
            subgroup: subgroup.clone(),
            group,
            embedding,
        })
    }

    pub fn parent(&self) -> &Arc<Group> {
        self.subgroup.parent()
    }

    /// Parent index of an element of the standalone group.
    pub fn to_parent(&self, x: Elem) -> Elem {
        self.embedding[x as usize]
    }

    /// Standalone index of a parent element, if it lies in the subgroup.
    pub fn from_parent(&self, x: Elem) -> Option<Elem> {
        if !self.subgroup.contains(x) {
            return None;
        }
        self.group.lookup(self.parent().perm(x))
    }

    pub fn embedding(&self) -> &[Elem] {
        &self.embedding
    }
}
