/// Numerical constants of the collision and targeting pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantProfile {
    pub name: &'static str,
    /// Required pairwise separation of spread triples, in units of ℓ.
    pub spread_factor: f64,
    /// Stage-one landing radius is ℓ / stage1_divisor.
    pub stage1_divisor: f64,
    /// Caps on the big- and small-coin differentials, as divisors of ℓ.
    pub diff_caps: (f64, f64),
    /// Targets lie within target_margin · ℓ of their cards.
    pub target_margin: f64,
    /// Collision window length after T, in units of n.
    pub collide_window: u64,
    /// Width of the time-selector window, in units of n.
    pub time_window: u64,
}

impl ConstantProfile {
    pub const ORIGINAL: ConstantProfile = ConstantProfile {
        name: "paper",
        spread_factor: 199.0,
        stage1_divisor: 2000.0,
        diff_caps: (16000.0, 8000.0),
        target_margin: 0.1,
        collide_window: 10,
        time_window: 4,
    };

    /// Smaller constants that keep the hypotheses satisfiable at n ≤ 10⁵.
    pub const DESK: ConstantProfile = ConstantProfile {
        name: "desk",
        spread_factor: 8.0,
        stage1_divisor: 20.0,
        diff_caps: (160.0, 80.0),
        target_margin: 0.5,
        collide_window: 10,
        time_window: 4,
    };

    pub fn by_name(name: &str) -> Option<ConstantProfile> {
        match name {
            "paper" => Some(Self::ORIGINAL),
            "desk" => Some(Self::DESK),
            _ => None,
        }
    }

    /// Scale handed to the middle (targeting) stage: the pairwise gap left
    /// after stage one, (ℓ/5 − 2ℓ/divisor), divided by the spread factor.
    /// Equals ℓ/1000 for the original constants.
    pub fn stage2_ell(&self, ell: f64) -> f64 {
        (ell / 5.0 - 2.0 * ell / self.stage1_divisor) / self.spread_factor
    }

    pub fn is_valid(&self) -> bool {
        [self.spread_factor, self.stage1_divisor, self.diff_caps.0, self.diff_caps.1, self.target_margin]
            .iter()
            .all(|&x| x > 0.0 && x.is_finite())
            && self.collide_window > 0
            && self.time_window > 0
    }
}
