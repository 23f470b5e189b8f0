use std::fmt;
use std::str::FromStr;

/// Base-station classes seen by the typical user.
///
/// `Fap` is the whole F-AP tier (maximal-RSRP view); the minimal-delay policy
/// splits it into F-APs that hold the requested content and those that do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    Fap,
    FapCached,
    FapUncached,
    Rrh,
}

impl Tier {
    pub const MIN_DELAY: [Tier; 3] = [Tier::FapCached, Tier::FapUncached, Tier::Rrh];
    pub const MAX_RSRP: [Tier; 2] = [Tier::Fap, Tier::Rrh];

    pub fn label(self) -> &'static str {
        match self {
            Tier::Fap => "F",
            Tier::FapCached => "Fc",
            Tier::FapUncached => "Ftc",
            Tier::Rrh => "R",
        }
    }

    pub fn is_fap(self) -> bool {
        !matches!(self, Tier::Rrh)
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "F" => Ok(Tier::Fap),
            "Fc" => Ok(Tier::FapCached),
            "Ftc" => Ok(Tier::FapUncached),
            "R" => Ok(Tier::Rrh),
            other => Err(format!("unknown tier label {other:?}")),
        }
    }
}
