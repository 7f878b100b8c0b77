use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{0} is not finite")]
    NonFinite(&'static str),
    #[error("circle radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("footprint requires 0 < width <= length, got width {width}, length {length}")]
    InvalidFootprint { width: f64, length: f64 },
}

/// Rejected parameter or scenario values. The first field names the offending
/// field so callers can report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid `{field}`: {reason}")]
pub struct ValidationError {
    pub field: String,
    pub reason: String,
}

impl ValidationError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<GeometryError> for ValidationError {
    fn from(err: GeometryError) -> Self {
        let field = match &err {
            GeometryError::NonFinite(what) => what.to_string(),
            GeometryError::InvalidRadius(_) => "radius".to_string(),
            GeometryError::InvalidFootprint { .. } => "footprint".to_string(),
        };
        ValidationError::new(field, err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("an obstacle point coincides with the robot center")]
    RootBlocked,
    #[error("no chain of {chain_length} circles found after {expansions} expansions")]
    NoPathFound { chain_length: usize, expansions: usize },
}
