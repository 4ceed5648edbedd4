pub mod bifurcation;
pub mod branch;
pub mod error;
pub mod extension;
pub mod factor;
pub mod modp;
pub mod numfield;
pub mod oracle;
pub mod parse;
pub mod pencil;
pub mod poly;
pub mod poly2;
pub mod resolve;
