use std::fs;
use std::path::PathBuf;

use mistylink::bench::{
    bench_all, check_reproduction, load_paper_table, merge_tables, paper_tables, parse_paper_table,
    rank_report, records_to_tsv, BenchMode, BenchOptions, BenchRecord, CellStatus, PAPER_CYCLES,
    PAPER_MEMORY,
};
use mistylink::ciphers::BlockCipherHandle;
use mistylink::ciphers::{CipherId, Profile};
use mistylink::linklayer::{self, LinkKey, LinkTxState, ReplayState};
use mistylink::mac::cbc_mac;
use mistylink::simnet::{error_propagation_report, run_scenario, ScenarioConfig, SplitMix64};
use mistylink::vectors::{self, VectorOutcome};

use crate::state::{decode_hex, load_replay, load_tx, save_replay, save_tx};
use crate::{BenchArgs, Failure, KeyArgs, MacArgs, OpenArgs, SealArgs, SimulateArgs, VectorArgs};

fn link_key(k: &KeyArgs) -> Result<LinkKey, Failure> {
    Ok(LinkKey::new(
        &decode_hex("--key-enc", &k.key_enc)?,
        &decode_hex("--key-mac", &k.key_mac)?,
    )?)
}

fn input(hex_arg: &Option<String>, file: &Option<PathBuf>, what: &str) -> Result<Vec<u8>, Failure> {
    match (hex_arg, file) {
        (Some(h), _) => decode_hex(what, h),
        (None, Some(p)) => Ok(fs::read(p)?),
        (None, None) => Err(Failure::usage(format!("{what} is required"))),
    }
}

fn emit(bytes: &[u8], out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => Ok(fs::write(p, bytes)?),
        None => {
            println!("{}", hex::encode(bytes));
            Ok(())
        }
    }
}

fn write_report(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn keygen(seed: Option<u64>) -> Result<(), Failure> {
    let mut rng = seed.map(SplitMix64::new);
    let mut fill = |buf: &mut [u8]| match rng.as_mut() {
        Some(r) => r.fill_bytes(buf),
        None => rand::fill(buf),
    };
    loop {
        let mut enc = [0u8; 16];
        let mut mac = [0u8; 16];
        fill(&mut enc);
        fill(&mut mac);
        if enc != mac {
            println!("enc={} mac={}", hex::encode(enc), hex::encode(mac));
            return Ok(());
        }
    }
}

pub fn seal(a: SealArgs) -> Result<(), Failure> {
    let key = link_key(&a.keys)?;
    let payload = input(&a.payload, &a.payload_file, "--payload")?;
    let mut tx = match (&a.state, a.ctr) {
        (Some(path), _) => load_tx(path)?,
        (None, Some(ctr)) => LinkTxState::resume(ctr.into())?,
        (None, None) => return Err(Failure::usage("one of --ctr or --state is required")),
    };
    let wire = linklayer::seal(&key, a.mode, a.dst, a.src, &payload, &mut tx)?;
    if let Some(path) = &a.state {
        save_tx(path, &tx)?;
    }
    emit(&wire, &a.out)
}

pub fn open(a: OpenArgs) -> Result<(), Failure> {
    let key = link_key(&a.keys)?;
    let wire = input(&a.frame, &a.frame_file, "--frame")?;
    let mut replay = match &a.state {
        Some(path) => load_replay(path)?,
        None => ReplayState::new(),
    };
    let (_, payload) = linklayer::open(&key, &wire, &mut replay)?;
    if let Some(path) = &a.state {
        save_replay(path, &replay)?;
    }
    emit(&payload, &a.out)
}

pub fn mac(a: MacArgs) -> Result<(), Failure> {
    let key = decode_hex("--key-mac", &a.key_mac)?;
    let cipher = BlockCipherHandle::new(CipherId::Misty1, &key)?;
    let data = input(&a.data, &a.data_file, "--data")?;
    println!("{}", cbc_mac(&cipher, &data));
    Ok(())
}

fn read_vectors(path: &Option<PathBuf>, builtin: &'static str) -> Result<String, Failure> {
    match path {
        None => Ok(builtin.to_string()),
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::usage(format!("cannot read vector file {}: {e}", p.display()))),
    }
}

pub fn vectors(a: VectorArgs) -> Result<(), Failure> {
    let cipher_text = read_vectors(&a.cipher_file, vectors::CIPHER_VECTORS)?;
    let frame_text = read_vectors(&a.frame_file, vectors::FRAME_VECTORS)?;
    let mut results: Vec<VectorOutcome> = vectors::check_cipher_vectors(&cipher_text);
    if results.is_empty() {
        eprintln!("warning: no cipher vectors found");
    }
    let frames = vectors::check_frame_vectors(&frame_text);
    if frames.is_empty() {
        eprintln!("warning: no frame vectors found");
    }
    results.extend(frames);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} vectors, {} passed, {} failed",
        results.len(),
        results.len() - failed,
        failed
    );
    if failed > 0 {
        return Err(Failure::check(format!("{failed} vector(s) failed")));
    }
    Ok(())
}

pub fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let config = ScenarioConfig::from_file(&a.scenario).map_err(|e| match e {
        mistylink::Error::Io(io) => Failure::usage(format!(
            "cannot read scenario {}: {io}",
            a.scenario.display()
        )),
        other => Failure::from(other),
    })?;
    let metrics = run_scenario(&config)?;
    let mut report = metrics.summary(&config);
    report.push('\n');
    report.push_str(&metrics.to_tsv());
    if let Some(p) = &config.propagation {
        let prop = error_propagation_report(p)?;
        report.push('\n');
        report.push_str(&prop.to_tsv());
    }
    write_report(&report, &a.out)
}

fn table(path: &Option<PathBuf>, builtin: &str) -> Result<Vec<BenchRecord>, Failure> {
    Ok(match path {
        Some(p) => load_paper_table(p)?,
        None => parse_paper_table(builtin)?,
    })
}

pub fn bench(a: BenchArgs) -> Result<(), Failure> {
    if a.paper_tables {
        let records = if a.memory_table.is_none() && a.cycles_table.is_none() {
            paper_tables()
        } else {
            merge_tables(
                table(&a.memory_table, PAPER_MEMORY)?,
                table(&a.cycles_table, PAPER_CYCLES)?,
            )
        };
        let report = rank_report(&records)?;
        let checks = check_reproduction(&report);
        let mut out = records_to_tsv(&records);
        out.push('\n');
        out.push_str(&report.render());
        for c in &checks {
            out.push_str(&format!("{c}\n"));
        }
        let count = |f: fn(&CellStatus) -> bool| checks.iter().filter(|c| f(&c.status)).count();
        let mismatches = count(|s| *s == CellStatus::Mismatch);
        out.push_str(&format!(
            "reproduction: {} match, {} mismatch, {} excluded\n",
            count(|s| *s == CellStatus::Match),
            mismatches,
            count(|s| matches!(s, CellStatus::Excluded(_)))
        ));
        write_report(&out, &a.out)?;
        if mismatches > 0 {
            return Err(Failure::check(format!(
                "{mismatches} ranking cell(s) differ"
            )));
        }
        return Ok(());
    }

    let records = bench_all(BenchOptions {
        payload_size: a.payload,
        iterations: a.iterations,
    })?;
    let report = rank_report(&records)?;
    let mut out = records_to_tsv(&records);
    out.push('\n');
    out.push_str(&report.render());
    for profile in Profile::ALL {
        let cost = |mode| {
            records
                .iter()
                .find(|r| {
                    r.cipher == Some(CipherId::Misty1) && r.profile == profile && r.mode == mode
                })
                .and_then(|r| r.percall_cost)
                .unwrap_or(f64::NAN)
        };
        let (ofb, cbc) = (cost(BenchMode::Ofb), cost(BenchMode::Cbc));
        out.push_str(&format!(
            "misty1 {profile}: ofb {ofb:.2} ns/byte, cbc encrypt {cbc:.2} ns/byte, ratio {:.3}\n",
            ofb / cbc
        ));
    }
    write_report(&out, &a.out)
}
