//! Deterministic test-state generators. Random generators use ChaCha8 seeded
//! from the caller's seed, so a (profile, seed) pair always yields the same bits
//! within one build.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SepError};
use crate::state::{Amplitude, DimensionProfile, PureState};
use crate::tolerance::ToleranceConfig;

/// (|0...0> + |1...1>)/sqrt(2) on `n` parties of dimension `levels`.
pub fn cat_state(n: usize, levels: usize) -> Result<PureState> {
    if n < 2 {
        return Err(SepError::Argument(format!(
            "cat state needs n >= 2, got {n}"
        )));
    }
    if levels < 2 {
        return Err(SepError::Argument(format!(
            "cat state needs at least 2 levels per party, got {levels}"
        )));
    }
    let profile = DimensionProfile::uniform(n, levels)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Amplitude::new(0.0, 0.0); profile.total()];
    amps[0] = Amplitude::new(h, 0.0);
    amps[profile.flat_index(&vec![1; n])?] = Amplitude::new(h, 0.0);
    PureState::new(profile, amps)
}

/// Uniform superposition of the `n` qubit basis states with exactly one party in |1>.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(SepError::Argument(format!("W state needs n >= 2, got {n}")));
    }
    let profile = DimensionProfile::uniform(n, 2)?;
    let a = Amplitude::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![Amplitude::new(0.0, 0.0); profile.total()];
    for k in 0..n {
        amps[1 << (n - 1 - k)] = a;
    }
    PureState::new(profile, amps)
}

/// Tensor product of single-party states.
pub fn product_state(factors: &[PureState], tol: &ToleranceConfig) -> Result<PureState> {
    if factors.is_empty() {
        return Err(SepError::Argument("product of zero factors".into()));
    }
    for (k, f) in factors.iter().enumerate() {
        if f.parties() != 1 {
            return Err(SepError::Precondition(format!(
                "factor {} has {} parties, expected 1",
                k + 1,
                f.parties()
            )));
        }
        if !f.is_normalized(tol) {
            return Err(SepError::Precondition(format!(
                "factor {} is not normalized (squared norm {})",
                k + 1,
                f.norm_sqr()
            )));
        }
    }
    let dims: Vec<usize> = factors.iter().map(|f| f.dims()[0]).collect();
    let profile = DimensionProfile::new(&dims)?;
    let mut amps = vec![Amplitude::new(1.0, 0.0)];
    for f in factors {
        amps = amps
            .iter()
            .flat_map(|&a| f.amplitudes().iter().map(move |&b| a * b))
            .collect();
    }
    PureState::new(profile, amps)
}

fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Amplitude> {
    (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Amplitude::new(re, im)
        })
        .collect()
}

/// Random product state together with the single-party factors it was built from.
pub fn random_product_with_factors(
    profile: &DimensionProfile,
    seed: u64,
) -> Result<(PureState, Vec<PureState>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors = profile
        .dims()
        .iter()
        .map(|&d| PureState::single(gaussian_vector(&mut rng, d))?.normalize())
        .collect::<Result<Vec<_>>>()?;
    let state = product_state(&factors, &ToleranceConfig::default())?;
    Ok((state, factors))
}

pub fn random_product_state(profile: &DimensionProfile, seed: u64) -> Result<PureState> {
    Ok(random_product_with_factors(profile, seed)?.0)
}

/// All 2d real components i.i.d. standard normal, then normalized.
pub fn random_state(profile: &DimensionProfile, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = gaussian_vector(&mut rng, profile.total());
    PureState::normalized(profile.clone(), amps)
}

/// Moves `state` a distance `eps` along the unit component of `direction`
/// orthogonal to `state`, then renormalizes.
pub fn perturb(state: &PureState, direction: &PureState, eps: f64) -> Result<PureState> {
    let tol = ToleranceConfig::default();
    if state.profile() != direction.profile() {
        return Err(SepError::Shape {
            expected: format!("dims {:?}", state.dims()),
            found: format!("dims {:?}", direction.dims()),
        });
    }
    state.require_normalized(&tol)?;
    direction.require_normalized(&tol)?;
    if eps == 0.0 {
        return Ok(state.clone());
    }
    let overlap = state.inner_product(direction)?;
    let orth: Vec<Amplitude> = direction
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(&v, &s)| v - overlap * s)
        .collect();
    let orth = PureState::new(state.profile().clone(), orth)?;
    let orth_norm = orth.norm();
    if orth_norm <= tol.zero {
        return Err(SepError::Degenerate(
            "perturbation direction is parallel to the state".into(),
        ));
    }
    let amps = state
        .amplitudes()
        .iter()
        .zip(orth.amplitudes())
        .map(|(&s, &w)| s + w * (eps / orth_norm))
        .collect();
    PureState::normalized(state.profile().clone(), amps)
}
