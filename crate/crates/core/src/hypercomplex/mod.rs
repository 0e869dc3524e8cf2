//! Quaternion and Cl(3,1) arithmetic, the ± split and the volume-time isomorphism.

mod multivector;
mod quaternion;

pub use multivector::{
    blade, blade_grade, quat_embed, quat_extract, Multivector31, STSplitPair, BLADE_COUNT, BLADE_NAMES, PRODUCT_TABLE,
};
pub use quaternion::{mixed_scalar, Quaternion, SplitPair};
