//! Comparison generators: uniform random suites, EPIcuRus-style input-range
//! narrowing driven by a regression tree, and output-diversity search.

mod cart;
mod epicurus;
mod od;

pub use cart::{fit_regression_tree, RegressionTree};
pub use epicurus::{
    epicurus_suite, EpicurusConfig, EpicurusOutcome, IterationLog, RangeAssumption,
};
pub use od::{
    apply_pieces, od_suite, output_diversity, OdClock, OdConfig, OdOutcome, OdState,
    PLATEAU_WINDOW, SIGMA_MAX, SIGMA_MIN,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::signal::{sample_test_case, InputSpec};
use crate::TestSuite;

/// `k` independent uniform test cases.
pub fn random_suite<R: Rng + ?Sized>(
    specs: &[InputSpec],
    k: usize,
    rng: &mut R,
) -> Result<TestSuite> {
    if k == 0 {
        return Err(Error::Config("suite size must be at least 1".into()));
    }
    (0..k).map(|_| sample_test_case(specs, rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_suite_contract() {
        let specs = vec![InputSpec::numeric("u", -1.0, 1.0, 3)];
        let s = random_suite(&specs, 4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|t| t.validate(&specs).is_ok()));
        assert_eq!(
            s,
            random_suite(&specs, 4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap()
        );
        assert!(matches!(
            random_suite(&specs, 0, &mut ChaCha8Rng::seed_from_u64(5)),
            Err(Error::Config(_))
        ));
    }
}
