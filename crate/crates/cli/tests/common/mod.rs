#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use stablenet::io::{parse_enewick, parse_mulnewick};
use stablenet::model::{MulTree, PhyloNetwork, PhyloTree, XNetwork};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn net(name: &str) -> XNetwork {
    parse_enewick(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn phylo(name: &str) -> PhyloNetwork {
    PhyloNetwork::try_from(net(name)).unwrap()
}

pub fn tree(name: &str) -> PhyloTree {
    PhyloTree::try_from(net(name)).unwrap()
}

pub fn mul(name: &str) -> MulTree {
    parse_mulnewick(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every shipped fixture file with its extension.
pub fn corpus() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".enwk") || n.ends_with(".nwk") || n.ends_with(".mnwk"))
        .collect();
    names.sort();
    names
}

pub fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablenet"))
        .args(args)
        .env_remove("STABLENET_PATH_CAP")
        .output()
        .expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}
