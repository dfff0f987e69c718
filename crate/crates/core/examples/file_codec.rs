//! Frame arbitrary bytes with each scheme and decode them again.

use locbal::cli::{decode_body, encode_frame, pack_bits, unpack_bits, Codec, FrameHeader};
use locbal::graph::search_best_block;
use locbal::{dyck, fsm, ConstraintParams};

fn main() -> locbal::Result<()> {
    let data = b"locally balanced";
    let payload = unpack_bits(data, data.len() * 8)?;
    let graph = search_best_block(ConstraintParams::new(8, 2)?, 7, 14)?.codebook;
    let codecs = [
        Codec::Dyck(dyck::build_codebook(8)?),
        Codec::Fsm(fsm::default_table()),
        Codec::Graph(graph),
    ];

    for codec in &codecs {
        let frame = encode_frame(codec, &payload)?;
        let header = FrameHeader::parse(&frame)?;
        let back = decode_body(codec, &header, &frame[FrameHeader::LEN..])?;
        assert_eq!(pack_bits(back.bits()), data);
        println!(
            "{:>5}: {} payload bits -> {} coded bits, {} bytes framed (ell {}, delta {}, s {}, m {})",
            header.scheme.to_string(),
            header.payload_bits,
            codec.coded_bits(header.payload_bits)?,
            frame.len(),
            header.ell,
            header.delta,
            header.s,
            header.m
        );
    }
    Ok(())
}
