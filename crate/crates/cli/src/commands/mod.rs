//! One module per subcommand. Each `run` writes its files into the output
//! directory and returns the JSON report it wrote.

pub mod bands;
pub mod spectrum;
pub mod susy;
pub mod tune;
pub mod verify;
