pub mod algebra;
pub mod ring;
pub mod witt;
pub mod asw;
pub mod counting;
pub mod carlitz;
pub mod verify;
