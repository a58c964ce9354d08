pub mod atlas;
pub mod fig2;
pub mod mismatch;
pub mod oracle;
pub mod protocol;
