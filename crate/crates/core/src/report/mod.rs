//! Genus 3–5 tables and the command-line front end.

mod cli;
mod table;

pub use cli::run_cli;
pub use table::{genus_table, render_table, OutputFormat, RowStatus, TableRow};
