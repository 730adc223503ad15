pub mod bound;
pub mod branch;
pub mod config;
pub mod construct;
pub mod dims;
pub mod forb;
pub mod shatter;
