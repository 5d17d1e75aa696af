use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime >= 5")]
    InvalidPrime(u64),
    #[error("polynomial vanishes identically modulo p")]
    ZeroPolynomial,
    #[error("family {0:?} is not given by a Weierstrass equation")]
    NotElliptic(String),
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("prime {0} is in the bad set of the family")]
    BadPrime(u64),
    #[error("fiber sum {fiber_sum} differs from direct enumeration {direct} at p = {p}")]
    ConsistencyFailure { p: u64, fiber_sum: u64, direct: u64 },
    #[error("residual characteristic {0} is too small for classification")]
    ResidualCharacteristicTooSmall(u64),
    #[error("no rational-component rule for {0} in strict mode")]
    UnimplementedType(String),
    #[error("inconsistent valuations at a place: v(c4)={v4:?} v(c6)={v6:?} v(disc)={vd}")]
    Misclassified {
        v4: Option<u32>,
        v6: Option<u32>,
        vd: u32,
    },
    #[error("sum of Euler numbers {0} is not a multiple of 12")]
    NonIntegralChi(i64),
    #[error("good prime {0} missing from the record stream")]
    MissingPrimes(u64),
    #[error("least-squares fit is ill-conditioned: {0}")]
    IllConditionedFit(String),
    #[error("surface trace unavailable for this family/convention")]
    UnavailableConvention,
    #[error("identity {identity} violated at p = {p}: {detail}")]
    IdentityViolation {
        identity: String,
        p: u64,
        detail: String,
    },
}
