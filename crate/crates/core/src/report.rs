//! Estimate records and the registry of bound citations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::rng::Moments;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub method: String,
}

impl EstimateReport {
    pub fn from_moments(m: &Moments, scale: f64, seed: u64, method: &str) -> Self {
        EstimateReport {
            value: m.mean() * scale,
            std_error: m.std_error() * scale.abs(),
            samples: m.n,
            seed,
            method: method.to_string(),
        }
    }

    /// Deterministic value (no sampling error).
    pub fn exact(value: f64, method: &str) -> Self {
        EstimateReport { value, std_error: 0.0, samples: 0, seed: 0, method: method.to_string() }
    }

    pub fn lower_3sigma(&self) -> f64 {
        self.value - 3.0 * self.std_error
    }

    pub fn upper_3sigma(&self) -> f64 {
        self.value + 3.0 * self.std_error
    }
}

macro_rules! bound_refs {
    ($($variant:ident => $tag:literal, $desc:literal;)*) => {
        /// Citation tags attached to every certificate and report record.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum BoundRef { $($variant),* }

        impl BoundRef {
            pub const ALL: &'static [BoundRef] = &[$(BoundRef::$variant),*];

            pub fn tag(self) -> &'static str {
                match self { $(BoundRef::$variant => $tag),* }
            }

            pub fn describe(self) -> &'static str {
                match self { $(BoundRef::$variant => $desc),* }
            }
        }

        impl FromStr for BoundRef {
            type Err = crate::Error;
            fn from_str(s: &str) -> crate::Result<Self> {
                match s {
                    $($tag => Ok(BoundRef::$variant),)*
                    _ => Err(crate::Error::Usage(format!("unknown bound_ref `{s}`"))),
                }
            }
        }
    };
}

bound_refs! {
    SphereWaist => "sphere-waist", "fiber of a map S^n -> R^k has (n-k)-volume >= s_{n-k}";
    OddMapCrofton => "odd-map-crofton", "zero set of an odd map S^n -> R^k has volume >= s_{n-k}";
    EvenMapPi => "even-map-pi", "some fiber of a map RP^3 -> S^2 has length >= pi";
    Rp2TwoPi => "rp2-two-pi", "some fiber of a function on RP^2 has length >= 2pi - eps";
    Rp3PiSquared => "rp3-pi-squared", "some fiber of a function on RP^3 has area >= pi^2";
    RpnNuT => "rpn-nu-t", "vol nu_t f^-1(y) >= vol nu_t RP^{n-k} for maps RP^n -> R^k";
    CpnNuT => "cpn-nu-t", "vol nu_t f^-1(y) >= vol nu_t CP^{n-m}";
    HopfTight => "hopf-tight", "Hopf fibrations have constant fiber volume equal to the bound";
    BallWaist => "ball-waist", "product of unit balls: some fiber has volume >= v_{n-k}";
    CubeVaaler => "cube-vaaler", "central sections of the unit cube have volume >= 1";
    TorusProduct => "torus-product", "orthogonal torus waist prod a_i, attained by projection";
    TorusIsoperimetry => "torus-isoperimetry", "half-volume subset of a torus: boundary >= 2 prod_{i<n} a_i";
    BoxIsoperimetry => "box-isoperimetry", "half-volume subset of a box: boundary >= prod_{i<n} a_i";
    TransportLipschitz => "transport-lipschitz", "transport maps have derivative at most 1";
    TransportDeterminant => "transport-determinant", "det DT|_L >= rho";
    ArchimedesMu => "archimedes-mu", "integral of mu_m over B^n equals s_{n+m}";
    RhoMonotone => "rho-monotone", "rho''_m increases to exp(-pi|y|^2)";
    PullbackEquality => "pullback-equality", "diameter of B^2 under p_1: weighted length = area of great sphere";
    WidthInscribed => "width-inscribed", "2r equals the width of a symmetric body";
    ZhangSection => "zhang-section", "volume-v_n symmetric body has a central section <= v_{n-k}";
    SectionLogConcave => "section-log-concave", "parallel section volumes are maximal through the center";
    BendingZ1 => "bending-z1", "skeleton part of the bent family <= 2 sqrt(p) + 2";
    BendingZ2 => "bending-z2", "collar part of the bent family <= 2 sqrt(p)";
    BendingTotal => "bending-total", "bent family volume <= 4 sqrt(p) + 2";
    CupUpper => "cup-upper", "vol a(n-k,n)^p <= 2^{n+k} C(n,k) p^{k/n}";
    CupLower => "cup-lower", "vol a(n-k,n)^p >= p^{k/n} via the partition argument";
    AlgebraicDegree => "algebraic-degree", "degree-d hypersurface in the cube has volume <= d n";
    AlgebraicInterpolating => "algebraic-interpolating", "interpolating curve family <= 2 sqrt(2) sqrt(p)";
    FillingBoundary => "filling-boundary", "boundary of H(z) equals z relative to the cube boundary";
    FillingLedger => "filling-ledger", "filling cover weight <= (2^{k+2}-2) input weight";
    FillingIndependence => "filling-independence", "filling ledger depends only on the cover";
    StarAssignment => "star-assignment", "assigned subface sets have size <= 2^k - 1";
    PartitionIdentity => "partition-identity", "boundary of C_I is the sum of C_{I+i}";
    SpaceConstants => "space-constants", "s_i = (i+1) v_{i+1}";
}

impl fmt::Display for BoundRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for BoundRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for &b in BoundRef::ALL {
            assert_eq!(b.tag().parse::<BoundRef>().unwrap(), b);
        }
    }

    #[test]
    fn tags_unique() {
        let mut tags: Vec<_> = BoundRef::ALL.iter().map(|b| b.tag()).collect();
        tags.sort();
        tags.dedup();
        assert_eq!(tags.len(), BoundRef::ALL.len());
    }
}
