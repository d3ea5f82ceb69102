//! Front ends for the tlg workbench: batch commands and the session server.

pub mod commands;
pub mod serve;
