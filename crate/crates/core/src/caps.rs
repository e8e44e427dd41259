/// Resource limits for enumeration and exhaustive checking.
///
/// `enum_cap` bounds the number of elements a single carrier may have before
/// element-by-element work (validation sweeps, kernel extraction, product
/// carriers) refuses to run.  `brute_cap` bounds the size of *search spaces*,
/// e.g. the number of candidate maps `|E'|^|R|` scanned when enumerating
/// derivations.  Both produce [`Error::CapExceeded`](crate::Error::CapExceeded)
/// rather than silently truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub enum_cap: u64,
    pub brute_cap: u64,
}

impl Caps {
    pub const DEFAULT_ENUM: u64 = 4096;
    pub const DEFAULT_BRUTE: u64 = 65536;

    /// Total law-instance budget for a single validation call.  A validation
    /// that would evaluate more variable assignments than this bails out with
    /// `CapExceeded` instead of running for hours.
    pub const ASSIGNMENT_BUDGET: u64 = 1 << 27;

    pub fn new(enum_cap: u64, brute_cap: u64) -> Self {
        Caps { enum_cap, brute_cap }
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enum_cap: Self::DEFAULT_ENUM,
            brute_cap: Self::DEFAULT_BRUTE,
        }
    }
}
