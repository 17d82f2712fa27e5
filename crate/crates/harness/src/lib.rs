//! Files, replay and the live session endpoint around the touchchart engine.

pub mod config;
pub mod describe;
pub mod error;
pub mod protocol;
pub mod replay;
pub mod server;
pub mod svg;
pub mod trace;
pub mod transcript;

pub use config::{LoadedSession, SessionConfig};
pub use error::{HarnessError, ProtocolError, TraceError};
pub use trace::TraceFile;
pub use transcript::Transcript;
