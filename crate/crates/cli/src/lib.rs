//! Batch front-end for `qmaps-core`: reads JSON documents describing algebras,
//! morphisms, families, semigroups and magic unitaries, runs the requested
//! verification and renders a text or structured report.

pub mod commands;
pub mod document;
pub mod report;
pub mod suite;

pub use commands::{run, CliError, Command, Request};
pub use document::{parse_document, read_document, to_json_string, Document, Kind, ParseError};
pub use report::{emit, Check, Format, Report, Status};
