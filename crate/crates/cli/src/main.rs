fn main() { println!("eunits placeholder"); }
