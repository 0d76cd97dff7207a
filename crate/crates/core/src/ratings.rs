//! Sparse user x item rating store.

use crate::error::{Error, Result};
use crate::graph::NodeId;

pub type ItemId = usize;

/// Closed rating interval declared at ingest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingScale {
    pub min: f64,
    pub max: f64,
}

impl RatingScale {
    pub const FILMTRUST: RatingScale = RatingScale { min: 0.5, max: 4.0 };
    pub const EPINIONS: RatingScale = RatingScale { min: 1.0, max: 5.0 };

    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(Error::Config(format!("invalid rating scale [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.min && r <= self.max
    }

    pub fn clamp(&self, r: f64) -> f64 {
        r.clamp(self.min, self.max)
    }
}

/// Ratings indexed by user and by item, with cached per-user means,
/// per-item counts and the global mean.
///
/// User ids coincide with the graph's dense node ids.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingTable {
    scale: RatingScale,
    by_user: Vec<Vec<(ItemId, f64)>>,
    item_count: Vec<usize>,
    user_sum: Vec<f64>,
    user_mean: Vec<f64>,
    total: usize,
    sum: f64,
}

impl RatingTable {
    pub fn new(users: usize, items: usize, scale: RatingScale) -> Self {
        Self {
            scale,
            by_user: vec![Vec::new(); users],
            item_count: vec![0; items],
            user_sum: vec![0.0; users],
            user_mean: vec![f64::NAN; users],
            total: 0,
            sum: 0.0,
        }
    }

    /// Inserts or overwrites `user`'s rating of `item`.
    pub fn insert(&mut self, user: NodeId, item: ItemId, rating: f64) -> Result<()> {
        self.check_user(user)?;
        self.check_item(item)?;
        if !self.scale.contains(rating) {
            return Err(Error::RatingOutOfScale {
                rating,
                min: self.scale.min,
                max: self.scale.max,
            });
        }
        let list = &mut self.by_user[user];
        match list.binary_search_by_key(&item, |&(i, _)| i) {
            Ok(pos) => {
                self.sum += rating - list[pos].1;
                list[pos].1 = rating;
            }
            Err(pos) => {
                list.insert(pos, (item, rating));
                self.item_count[item] += 1;
                self.total += 1;
                self.sum += rating;
            }
        }
        // recompute rather than update incrementally so the mean stays exact
        let s: f64 = list.iter().map(|&(_, r)| r).sum();
        self.user_sum[user] = s;
        self.user_mean[user] = s / list.len() as f64;
        Ok(())
    }

    fn check_user(&self, user: NodeId) -> Result<()> {
        if user < self.by_user.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode {
                node: user,
                n: self.by_user.len(),
            })
        }
    }

    fn check_item(&self, item: ItemId) -> Result<()> {
        if item < self.item_count.len() {
            Ok(())
        } else {
            Err(Error::UnknownItem {
                item,
                n: self.item_count.len(),
            })
        }
    }

    pub(crate) fn ensure_user_item(&self, user: NodeId, item: ItemId) -> Result<()> {
        self.check_user(user)?;
        self.check_item(item)
    }

    pub fn scale(&self) -> RatingScale {
        self.scale
    }

    pub fn user_count(&self) -> usize {
        self.by_user.len()
    }

    pub fn item_count(&self) -> usize {
        self.item_count.len()
    }

    /// Number of stored ratings.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn rating(&self, user: NodeId, item: ItemId) -> Option<f64> {
        let list = self.by_user.get(user)?;
        list.binary_search_by_key(&item, |&(i, _)| i)
            .ok()
            .map(|pos| list[pos].1)
    }

    /// Ratings of `user`, ascending by item.
    pub fn user_ratings(&self, user: NodeId) -> &[(ItemId, f64)] {
        &self.by_user[user]
    }

    /// Mean of `user`'s ratings; NaN when the user has none.
    pub fn user_mean(&self, user: NodeId) -> f64 {
        self.user_mean[user]
    }

    pub(crate) fn user_sum(&self, user: NodeId) -> f64 {
        self.user_sum[user]
    }

    pub fn ratings_of_item(&self, item: ItemId) -> usize {
        self.item_count[item]
    }

    pub fn item_counts(&self) -> &[usize] {
        &self.item_count
    }

    /// Mean over all stored ratings; NaN on an empty table.
    pub fn global_mean(&self) -> f64 {
        if self.total == 0 {
            f64::NAN
        } else {
            self.sum / self.total as f64
        }
    }

    /// All ratings as `(user, item, rating)`, ascending by `(user, item)`.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, ItemId, f64)> + '_ {
        self.by_user
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&(i, r)| (u, i, r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn caches_follow_inserts() {
        let mut t = RatingTable::new(2, 3, RatingScale::EPINIONS);
        t.insert(0, 0, 4.0).unwrap();
        t.insert(0, 2, 2.0).unwrap();
        t.insert(1, 2, 5.0).unwrap();
        assert_eq!(t.user_mean(0), 3.0);
        assert_eq!(t.ratings_of_item(2), 2);
        assert_eq!(t.len(), 3);
        assert!((t.global_mean() - 11.0 / 3.0).abs() < 1e-15);
        t.insert(0, 2, 4.0).unwrap();
        assert_eq!(t.user_mean(0), 4.0);
        assert_eq!(t.len(), 3);
        assert!(t.user_mean(1).is_finite());
    }

    #[test]
    fn rejects_out_of_scale_and_unknown() {
        let mut t = RatingTable::new(1, 1, RatingScale::FILMTRUST);
        assert!(matches!(t.insert(0, 0, 4.5), Err(Error::RatingOutOfScale { .. })));
        assert!(matches!(t.insert(0, 3, 1.0), Err(Error::UnknownItem { .. })));
        assert!(matches!(t.insert(2, 0, 1.0), Err(Error::UnknownNode { .. })));
    }

    proptest! {
        #[test]
        fn user_mean_is_exact_mean(ops in prop::collection::vec((0usize..4, 0usize..6, 1u8..=5), 1..60)) {
            let mut t = RatingTable::new(4, 6, RatingScale::EPINIONS);
            for (u, i, r) in ops {
                t.insert(u, i, r as f64).unwrap();
            }
            for u in 0..4 {
                let l = t.user_ratings(u);
                if l.is_empty() {
                    prop_assert!(t.user_mean(u).is_nan());
                } else {
                    let m = l.iter().map(|x| x.1).sum::<f64>() / l.len() as f64;
                    prop_assert_eq!(t.user_mean(u), m);
                }
            }
            let count: usize = t.item_counts().iter().sum();
            prop_assert_eq!(count, t.len());
        }
    }
}
