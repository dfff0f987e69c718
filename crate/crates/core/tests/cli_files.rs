use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use locbal::cli::{
    decode_body, decode_frame, encode_frame, run, unpack_bits, Codec, CodecSources, FrameHeader,
    Scheme,
};
use locbal::enumeration::count_with_prefix_bruteforce;
use locbal::graph::{build_codebook, build_graph, find_max_subgraph, GraphCodebook};
use locbal::words::{dis, is_locally_balanced};
use locbal::{dyck, fsm, ConstraintParams, Word};
use proptest::prelude::*;
use tempfile::TempDir;

fn lbc(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["lbc"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn graph_codebook() -> &'static GraphCodebook {
    static CB: OnceLock<GraphCodebook> = OnceLock::new();
    CB.get_or_init(|| {
        let g = build_graph(ConstraintParams::new(6, 1).unwrap(), 15).unwrap();
        build_codebook(&g, &find_max_subgraph(&g).unwrap()).unwrap()
    })
}

fn codecs() -> Vec<Codec> {
    vec![
        Codec::Dyck(dyck::build_codebook(3).unwrap()),
        Codec::Dyck(dyck::build_codebook(8).unwrap()),
        Codec::Fsm(fsm::default_table()),
        Codec::Graph(graph_codebook().clone()),
    ]
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn file_roundtrip_for_every_scheme() {
    let dir = TempDir::new().unwrap();
    let cb = dir.path().join("code.lbg");
    let (code, text) = lbc(&[
        "search",
        "--ell",
        "4",
        "--delta",
        "1",
        "--m-min",
        "3",
        "--m-max",
        "13",
        "--codebook",
        p(&cb),
    ]);
    assert_eq!(code, 0);
    assert!(text.contains("rate = 11/13 = 0.846"), "{text}");

    for len in [0usize, 1, 2, 3, 17, 500] {
        let input = dir.path().join(format!("in{len}"));
        let data: Vec<u8> = (0..len).map(|i| (i * 37 % 251) as u8).collect();
        fs::write(&input, &data).unwrap();
        for scheme in ["dyck", "fsm", "graph"] {
            let enc = dir.path().join(format!("enc-{scheme}-{len}"));
            let dec = dir.path().join(format!("dec-{scheme}-{len}"));
            let args = [
                "encode",
                "--scheme",
                scheme,
                "--s",
                "5",
                "--codebook",
                p(&cb),
                p(&input),
                p(&enc),
            ];
            assert_eq!(lbc(&args).0, 0, "{scheme} {len}");
            assert_eq!(
                lbc(&["decode", "--codebook", p(&cb), p(&enc), p(&dec)]).0,
                0
            );
            assert_eq!(fs::read(&dec).unwrap(), data, "{scheme} {len}");
        }
    }
}

#[test]
fn encoded_sizes() {
    let dir = TempDir::new().unwrap();
    let one = dir.path().join("one");
    fs::write(&one, [0xA5]).unwrap();
    let out = dir.path().join("out");
    assert_eq!(lbc(&["encode", "--scheme", "fsm", p(&one), p(&out)]).0, 0);
    let bytes = fs::read(&out).unwrap();
    let header = FrameHeader::parse(&bytes).unwrap();
    assert_eq!((header.scheme, header.payload_bits), (Scheme::Fsm, 8));
    // 13 coded bits fill two bytes.
    assert_eq!(bytes.len(), FrameHeader::LEN + 2);

    let empty = dir.path().join("empty");
    fs::write(&empty, []).unwrap();
    assert_eq!(lbc(&["encode", "--scheme", "fsm", p(&empty), p(&out)]).0, 0);
    assert_eq!(&fs::read(&out).unwrap()[FrameHeader::LEN..], &[0x80]);

    let codec = Codec::Dyck(dyck::build_codebook(3).unwrap());
    let frame = encode_frame(&codec, &"101".parse().unwrap()).unwrap();
    assert_eq!(codec.coded_bits(3).unwrap(), 5);
    assert_eq!(frame.len(), FrameHeader::LEN + 1);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    fs::write(&input, b"balanced").unwrap();
    let enc = dir.path().join("enc");
    let dec = dir.path().join("dec");
    let missing = dir.path().join("missing");

    assert_eq!(
        lbc(&["encode", "--scheme", "nrzi", p(&input), p(&enc)]).0,
        2
    );
    assert_eq!(
        lbc(&["encode", "--scheme", "fsm", p(&missing), p(&enc)]).0,
        3
    );
    assert_eq!(
        lbc(&["encode", "--scheme", "graph", p(&input), p(&enc)]).0,
        2
    );

    assert_eq!(lbc(&["encode", "--scheme", "fsm", p(&input), p(&enc)]).0, 0);
    let frame = fs::read(&enc).unwrap();
    let cut = dir.path().join("cut");
    fs::write(&cut, &frame[..frame.len() - 3]).unwrap();
    assert_eq!(lbc(&["decode", p(&cut), p(&dec)]).0, 4);

    let mut bad = frame.clone();
    bad[0] = b'X';
    fs::write(&cut, &bad).unwrap();
    assert_eq!(lbc(&["decode", p(&cut), p(&dec)]).0, 2);

    // A coded bit pushing the RDS out of the band.
    let mut flipped = frame.clone();
    flipped[FrameHeader::LEN] ^= 0xE0;
    fs::write(&cut, &flipped).unwrap();
    assert_eq!(lbc(&["decode", p(&cut), p(&dec)]).0, 4);

    let cb = graph_codebook();
    let graph_frame = encode_frame(&Codec::Graph(cb.clone()), &Word::zeros(24)).unwrap();
    fs::write(&cut, &graph_frame).unwrap();
    assert_eq!(lbc(&["decode", p(&cut), p(&dec)]).0, 2);
    assert_eq!(
        lbc(&["decode", "--codebook", p(&missing), p(&cut), p(&dec)]).0,
        2
    );
}

#[test]
fn report_commands() {
    let (code, text) = lbc(&["capacity"]);
    assert_eq!(code, 0);
    assert!(
        text.starts_with("ell,delta,capacity\n4,1,0.879\n6,1,0.841\n"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 13);

    let (code, text) = lbc(&["capacity", "--rds", "--delta", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows[0]["capacity"], 0.694);

    let (code, text) = lbc(&[
        "capacity",
        "--ell",
        "8",
        "--ell-max",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!((code, text.trim()), (0, "[]"));

    let (code, text) = lbc(&[
        "search", "--ell", "4", "--delta", "2", "--m-min", "3", "--m-max", "4",
    ]);
    assert_eq!(code, 0);
    assert!(text.contains("rate = 3/3 = 1.000"), "{text}");

    let (code, text) = lbc(&["count", "--n-max", "12", "--prefix", "000"]);
    assert_eq!(code, 0);
    let p61 = ConstraintParams::new(6, 1).unwrap();
    let z: Word = "000".parse().unwrap();
    let last = format!(
        "12,{}\n",
        count_with_prefix_bruteforce(&p61, 12, &z).unwrap()
    );
    assert!(text.ends_with(&last), "{text}");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(lbc(&["verify", "--n-min", "6", "--n-max", "28"]).0, 0);
    assert_eq!(
        lbc(&["verify", "--n-min", "6", "--n-max", "12", "--inject-fault"]).0,
        6
    );
    let (code, text) = lbc(&["verify", "--n-min", "6", "--n-max", "8", "--format", "json"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["pass"], true);
    // From n = 1 the short lengths fail.
    assert_eq!(lbc(&["verify", "--n-max", "28"]).0, 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frames_roundtrip_bit_exactly(raw in prop::collection::vec(0u8..=1, 0..=4096)) {
        let payload = Word::from_bits(raw).unwrap();
        let params = [ConstraintParams::new(4, 1).unwrap(), ConstraintParams::new(6, 1).unwrap()];
        for codec in codecs() {
            let frame = encode_frame(&codec, &payload).unwrap();
            let header = FrameHeader::parse(&frame).unwrap();
            prop_assert_eq!(header.payload_bits, payload.len() as u64);
            let coded = codec.coded_bits(header.payload_bits).unwrap() as usize;
            prop_assert_eq!(frame.len(), FrameHeader::LEN + coded.div_ceil(8));
            let code = unpack_bits(&frame[FrameHeader::LEN..], coded).unwrap();
            match codec {
                Codec::Graph(_) => prop_assert!(is_locally_balanced(&code, &params[1])),
                _ => prop_assert!(dis(&code) <= 3 && is_locally_balanced(&code, &params[0])),
            }
            codec.check_header(&header).unwrap();
            prop_assert_eq!(&decode_body(&codec, &header, &frame[FrameHeader::LEN..]).unwrap(), &payload);
            if !matches!(codec, Codec::Graph(_)) {
                prop_assert_eq!(&decode_frame(&frame, &CodecSources::default()).unwrap(), &payload);
            }
        }
    }
}
