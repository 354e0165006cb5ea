//! Library side of the `efimov` command: the verification criteria and the
//! output formats, shared by the binary and the acceptance target.

pub mod checks;
pub mod output;
