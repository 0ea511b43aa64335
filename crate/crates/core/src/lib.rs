pub mod gamma;
pub mod ideals;
pub mod io;
pub mod lengths;
pub mod locsys;
pub mod scenario;
pub mod spectrum;
pub mod zmod;
