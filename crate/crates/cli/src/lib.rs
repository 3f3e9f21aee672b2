pub mod commands;
pub mod gen;
pub mod io;
pub mod svg;
pub mod verify;
