//! Effect sizes and Scott-Knott rank partitioning.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest |delta| that is not a negligible effect.
pub const CLIFFS_SIGNIFICANT: f64 = 0.147;

/// `(#(x > y) - #(x < y)) / (|c1| |c2|)` over all pairs.
pub fn cliffs_delta(c1: &[f64], c2: &[f64]) -> Result<f64> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::Contract("cliffs delta of an empty sample".into()));
    }
    let mut more = 0i64;
    let mut less = 0i64;
    for x in c1 {
        for y in c2 {
            match x.partial_cmp(y) {
                Some(Ordering::Greater) => more += 1,
                Some(Ordering::Less) => less += 1,
                _ => {}
            }
        }
    }
    Ok((more - less) as f64 / (c1.len() * c2.len()) as f64)
}

pub fn is_significant(delta: f64) -> bool {
    delta.abs() >= CLIFFS_SIGNIFICANT
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Expected change of the mean when `c1 ++ c2` is divided into its parts.
pub fn expected_delta(c1: &[f64], c2: &[f64]) -> Result<f64> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::Contract("cannot divide into an empty part".into()));
    }
    let n = (c1.len() + c2.len()) as f64;
    let mu = (c1.iter().sum::<f64>() + c2.iter().sum::<f64>()) / n;
    Ok((c1.len() as f64 * (mean(c1) - mu).abs() + c2.len() as f64 * (mean(c2) - mu).abs()) / n)
}

/// Linear-interpolation quantile (`q` in `[0, 1]`) of an unsorted sample.
pub fn quantile(xs: &[f64], q: f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Contract("quantile of an empty sample".into()));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Ok(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

pub fn median(xs: &[f64]) -> Result<f64> {
    quantile(xs, 0.5)
}

pub fn iqr(xs: &[f64]) -> Result<f64> {
    Ok(quantile(xs, 0.75)? - quantile(xs, 0.25)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedGroup {
    pub name: String,
    pub values: Vec<f64>,
    pub median: f64,
    pub iqr: f64,
    /// 1 is best; indistinguishable groups share a rank.
    pub rank: usize,
}

/// Groups ordered best-first with their Scott-Knott ranks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedGroups {
    pub groups: Vec<RankedGroup>,
}

impl RankedGroups {
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.groups.iter().find(|g| g.name == name).map(|g| g.rank)
    }

    pub fn get(&self, name: &str) -> Option<&RankedGroup> {
        self.groups.iter().find(|g| g.name == name)
    }

    /// `group,median,iqr,rank` rows in rank order.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["group", "median", "iqr", "rank"])?;
        for g in &self.groups {
            w.write_record([
                g.name.clone(),
                g.median.to_string(),
                g.iqr.to_string(),
                g.rank.to_string(),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Contract(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Ranks named samples with Scott-Knott.
///
/// Groups are sorted by median (best first per `maximize`; means, then
/// names, break ties), then the list is recursively cut where the expected
/// change of the pooled mean is largest. A cut is kept only when the Cliff's delta
/// between the two pooled sides is significant, at every level.
pub fn scott_knott(groups: &[(String, Vec<f64>)], maximize: bool) -> Result<RankedGroups> {
    let mut sorted = Vec::with_capacity(groups.len());
    for (name, values) in groups {
        if values.is_empty() {
            return Err(Error::Contract(format!("group `{name}` has no values")));
        }
        sorted.push(RankedGroup {
            name: name.clone(),
            values: values.clone(),
            median: median(values)?,
            iqr: iqr(values)?,
            rank: 0,
        });
    }
    sorted.sort_by(|a, b| {
        let by_median = if maximize {
            b.median.total_cmp(&a.median)
        } else {
            a.median.total_cmp(&b.median)
        };
        let by_mean = if maximize {
            mean(&b.values).total_cmp(&mean(&a.values))
        } else {
            mean(&a.values).total_cmp(&mean(&b.values))
        };
        by_median.then(by_mean).then_with(|| a.name.cmp(&b.name))
    });
    let mut next_rank = 1;
    partition(&mut sorted, &mut next_rank)?;
    Ok(RankedGroups { groups: sorted })
}

fn pooled(groups: &[RankedGroup]) -> Vec<f64> {
    groups
        .iter()
        .flat_map(|g| g.values.iter().copied())
        .collect()
}

fn partition(groups: &mut [RankedGroup], next_rank: &mut usize) -> Result<()> {
    if groups.len() > 1 {
        let mut best: Option<(usize, f64)> = None;
        for cut in 1..groups.len() {
            let e = expected_delta(&pooled(&groups[..cut]), &pooled(&groups[cut..]))?;
            if best.is_none_or(|(_, b)| e > b) {
                best = Some((cut, e));
            }
        }
        let (cut, _) = best.expect("at least one cut");
        let delta = cliffs_delta(&pooled(&groups[..cut]), &pooled(&groups[cut..]))?;
        if is_significant(delta) {
            let (head, tail) = groups.split_at_mut(cut);
            partition(head, next_rank)?;
            return partition(tail, next_rank);
        }
    }
    for g in groups.iter_mut() {
        g.rank = *next_rank;
    }
    *next_rank += 1;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str, v: &[f64]) -> (String, Vec<f64>) {
        (name.to_string(), v.to_vec())
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            cliffs_delta(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap(),
            -1.0
        );
        assert_eq!(
            cliffs_delta(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap(),
            1.0
        );
        assert_eq!(cliffs_delta(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!(cliffs_delta(&[], &[1.0]).is_err());
    }

    #[test]
    fn significance_is_magnitude_based() {
        assert!(is_significant(0.147));
        assert!(is_significant(-0.5));
        assert!(!is_significant(0.1));
    }

    #[test]
    fn expected_delta_of_flat_split() {
        assert_eq!(expected_delta(&[1.0, 2.0], &[9.0, 10.0]).unwrap(), 4.0);
    }

    #[test]
    fn quantiles_interpolate() {
        let xs = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(median(&xs).unwrap(), 2.5);
        assert_eq!(iqr(&xs).unwrap(), 1.5);
        assert_eq!(median(&[7.0]).unwrap(), 7.0);
    }

    #[test]
    fn distinct_groups_get_two_ranks() {
        let r = scott_knott(&[g("A", &[1.0; 3]), g("B", &[5.0; 3])], true).unwrap();
        assert_eq!(r.groups[0].name, "B");
        assert_eq!(r.rank_of("B"), Some(1));
        assert_eq!(r.rank_of("A"), Some(2));
        let r = scott_knott(&[g("A", &[1.0; 3]), g("B", &[5.0; 3])], false).unwrap();
        assert_eq!(r.rank_of("A"), Some(1));
    }

    #[test]
    fn equal_groups_share_a_rank() {
        let r = scott_knott(&[g("A", &[1.0; 3]), g("B", &[1.0; 3])], true).unwrap();
        assert_eq!(r.rank_of("A"), Some(1));
        assert_eq!(r.rank_of("B"), Some(1));
        let r = scott_knott(&[g("solo", &[0.3, 0.4])], true).unwrap();
        assert_eq!(r.rank_of("solo"), Some(1));
        assert!(scott_knott(&[g("A", &[])], true).is_err());
    }

    #[test]
    fn recursion_separates_three_levels() {
        let groups = [
            g("lo", &[0.1, 0.12, 0.11]),
            g("mid", &[0.5, 0.52, 0.51]),
            g("mid2", &[0.5, 0.51, 0.52]),
            g("hi", &[0.9, 0.91, 0.92]),
        ];
        let r = scott_knott(&groups, true).unwrap();
        assert_eq!(r.rank_of("hi"), Some(1));
        assert_eq!(r.rank_of("mid"), Some(2));
        assert_eq!(r.rank_of("mid2"), Some(2));
        assert_eq!(r.rank_of("lo"), Some(3));
        let mut reversed = groups.to_vec();
        reversed.reverse();
        assert_eq!(scott_knott(&reversed, true).unwrap(), r);
    }

    #[test]
    fn csv_rows() {
        let r = scott_knott(&[g("A", &[1.0; 3]), g("B", &[5.0; 3])], true).unwrap();
        assert_eq!(
            r.to_csv().unwrap(),
            "group,median,iqr,rank\nB,5,0,1\nA,1,0,2\n"
        );
    }
}
