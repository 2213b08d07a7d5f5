use std::path::Path;
use std::process::{Command, Output};

use mistylink::ciphers::{BlockCipherHandle, CipherId};
use mistylink::linklayer::{open, seal, LinkKey, LinkTxState, ReplayState, SecurityMode};
use mistylink::mac::cbc_mac;
use mistylink::simnet::SplitMix64;

const ENC: &str = "00112233445566778899aabbccddeeff";
const MAC: &str = "ffeeddccbbaa99887766554433221100";
const GOLDEN: &str = "00010002010500000001e2d5c32e716be8e599";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mistylink"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn keys() -> [&'static str; 4] {
    ["--key-enc", ENC, "--key-mac", MAC]
}

#[test]
fn golden_seal_and_open() {
    let mut args = vec!["seal"];
    args.extend(keys());
    args.extend([
        "--dst",
        "1",
        "--src",
        "2",
        "--ctr",
        "1",
        "--payload",
        "48454c4c4f",
    ]);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), GOLDEN);

    let mut args = vec!["open"];
    args.extend(keys());
    args.extend(["--frame", GOLDEN]);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "48454c4c4f");
}

#[test]
fn hex_is_case_insensitive() {
    let upper_enc = ENC.to_uppercase();
    let upper_frame = GOLDEN.to_uppercase();
    let o = run(&[
        "open",
        "--key-enc",
        &upper_enc,
        "--key-mac",
        MAC,
        "--frame",
        &upper_frame,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "48454c4c4f");
}

#[test]
fn truncated_frame_exits_2() {
    let mut args = vec!["open"];
    args.extend(keys());
    args.extend(["--frame", &GOLDEN[..20]]);
    assert_eq!(code(&run(&args)), 2);
}

#[test]
fn flipped_tag_exits_3() {
    let mut frame = GOLDEN.to_string();
    frame.replace_range(frame.len() - 1.., "8");
    let mut args = vec!["open"];
    args.extend(keys());
    args.extend(["--frame", &frame]);
    assert_eq!(code(&run(&args)), 3);
}

#[test]
fn replay_with_state_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("replay.state");
    let state = state.to_str().unwrap();
    let mut args = vec!["open"];
    args.extend(keys());
    args.extend(["--frame", GOLDEN, "--state", state]);
    assert_eq!(code(&run(&args)), 0);
    assert!(std::fs::read_to_string(state).unwrap().contains("src.2=1"));
    assert_eq!(code(&run(&args)), 4);
}

#[test]
fn seal_state_file_advances_counter() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("tx.state");
    let state = state.to_str().unwrap();
    let mut args = vec!["seal"];
    args.extend(keys());
    args.extend([
        "--dst",
        "1",
        "--src",
        "2",
        "--state",
        state,
        "--payload",
        "00",
    ]);
    let first = stdout(&run(&args));
    let second = stdout(&run(&args));
    assert_ne!(first, second);
    assert_eq!(std::fs::read_to_string(state).unwrap().trim(), "next_ctr=3");
}

#[test]
fn keygen_seeded_is_deterministic() {
    let a = stdout(&run(&["keygen", "--seed", "42"]));
    assert_eq!(a, stdout(&run(&["keygen", "--seed", "42"])));
    assert_ne!(a, stdout(&run(&["keygen", "--seed", "43"])));
}

#[test]
fn keygen_unseeded_is_fresh_and_parses() {
    let mut seen = std::collections::HashSet::new();
    for _ in 0..10 {
        let o = run(&["keygen"]);
        assert_eq!(code(&o), 0);
        let line = stdout(&o);
        let (enc, mac) = line.trim().split_once(' ').unwrap();
        let enc = hex::decode(enc.strip_prefix("enc=").unwrap()).unwrap();
        let mac = hex::decode(mac.strip_prefix("mac=").unwrap()).unwrap();
        LinkKey::new(&enc, &mac).unwrap();
        assert!(seen.insert(line));
    }
}

#[test]
fn vectors_pristine_and_corrupted() {
    let o = run(&["vectors"]);
    assert_eq!(code(&o), 0);

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("cipher_vectors.txt")).unwrap();
    let line = text.lines().find(|l| l.starts_with("misty1")).unwrap();
    let mut bad = line.to_string();
    let last = bad.pop().unwrap();
    bad.push(if last == '0' { '1' } else { '0' });
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, text.replacen(line, &bad, 1)).unwrap();
    let o = run(&["vectors", "--cipher-file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["vectors", "--cipher-file", empty.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    let missing = dir.path().join("missing.txt");
    assert_eq!(
        code(&run(&[
            "vectors",
            "--cipher-file",
            missing.to_str().unwrap()
        ])),
        5
    );
}

#[test]
fn simulate_is_repeatable() {
    let path = data("scenarios/example.scn");
    let a = run(&["simulate", &path]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&["simulate", &path]).stdout);
}

#[test]
fn simulate_rejects_unkeyed_flow() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scn");
    std::fs::write(
        &path,
        "[scenario]\nname = bad\nseed = 1\n[nodes]\ncount = 3\n[keys]\n\
         link = 1 2 00112233445566778899aabbccddeeff ffeeddccbbaa99887766554433221100\n\
         [traffic]\nflow = 1 2 8 4\nflow = 1 3 8 4\n",
    )
    .unwrap();
    let o = run(&["simulate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("line 10"),
        "{o:?}"
    );
}

#[test]
fn bench_paper_tables_succeeds() {
    let o = run(&["bench", "--paper-tables"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("MATCH"));
}

#[test]
fn cli_agrees_with_library() {
    let mut rng = SplitMix64::new(99);
    for i in 0..100u32 {
        let mut enc = [0u8; 16];
        let mut mac = [0u8; 16];
        rng.fill_bytes(&mut enc);
        rng.fill_bytes(&mut mac);
        let key = match LinkKey::new(&enc, &mac) {
            Ok(k) => k,
            Err(_) => continue,
        };
        let mut payload = vec![0u8; rng.below(48) as usize];
        rng.fill_bytes(&mut payload);
        let mode = if i % 2 == 0 {
            SecurityMode::Ae
        } else {
            SecurityMode::Auth
        };
        let (dst, src) = (rng.below(65536) as u16, rng.below(65536) as u16);
        let ctr = rng.below(1 << 32);

        let expected = seal(
            &key,
            mode,
            dst,
            src,
            &payload,
            &mut LinkTxState::resume(ctr).unwrap(),
        )
        .unwrap();
        let (enc_hex, mac_hex, pay_hex) =
            (hex::encode(enc), hex::encode(mac), hex::encode(&payload));
        let (dst, src, ctr) = (dst.to_string(), src.to_string(), ctr.to_string());
        let mode_name = mode.to_string();
        let o = run(&[
            "seal",
            "--key-enc",
            &enc_hex,
            "--key-mac",
            &mac_hex,
            "--mode",
            &mode_name,
            "--dst",
            &dst,
            "--src",
            &src,
            "--ctr",
            &ctr,
            "--payload",
            &pay_hex,
        ]);
        assert_eq!(stdout(&o).trim(), hex::encode(&expected), "case {i}");

        let (_, plain) = open(&key, &expected, &mut ReplayState::new()).unwrap();
        let o = run(&[
            "open",
            "--key-enc",
            &enc_hex,
            "--key-mac",
            &mac_hex,
            "--frame",
            &hex::encode(&expected),
        ]);
        assert_eq!(stdout(&o).trim(), hex::encode(plain), "case {i}");

        let cipher = BlockCipherHandle::new(CipherId::Misty1, &mac).unwrap();
        let o = run(&["mac", "--key-mac", &mac_hex, "--data", &pay_hex]);
        assert_eq!(
            stdout(&o).trim(),
            cbc_mac(&cipher, &payload).to_string(),
            "case {i}"
        );
    }
}
