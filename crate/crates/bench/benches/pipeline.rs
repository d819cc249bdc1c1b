use std::hint::black_box;

use chordlift::lexicon::{Lexicon, NeutralBand};
use chordlift::metadata::LevelFilter;
use chordlift::modeling::greedy_aic;
use chordlift::stats::{mann_whitney_one_tailed, Alternative, ChordValence};
use chordlift::tab::{parse_tab, TabDocument};
use chordlift::wordshift::{word_shift, Bag};
use chordlift::{parse_chord, ChordCategory, Factor};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOKENS: [&str; 10] = [
    "C", "F#m", "Bbmaj7", "G*", "Dsus4", "E7", "Am/G", "hello", "Cadd9", "H7",
];

fn tab_body(verses: usize) -> String {
    let mut body = String::new();
    for i in 0..verses {
        body.push_str(&format!("[Verse {i}]\n"));
        body.push_str("C           Am\nwell I heard there was a secret chord\n");
        body.push_str("   F        G          C    G\nthat David played and it pleased the Lord\n\n");
    }
    body
}

fn chords(n: usize, seed: u64) -> Vec<ChordValence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let genres = ["Rock", "Punk", "Folk", "Pop"];
    let eras = ["1960's", "1970's", "1980's"];
    (0..n)
        .map(|_| {
            let v = rng.random_range(1.0..9.0);
            ChordValence {
                song_id: "s".into(),
                category: ChordCategory::ANALYZED[rng.random_range(0..5)],
                genre: Some(genres[rng.random_range(0..4)].to_string()),
                era: Some(eras[rng.random_range(0..3)].to_string()),
                region: None,
                valence: v,
                word_valences: vec![v],
            }
        })
        .collect()
}

fn bench_parsing(c: &mut Criterion) {
    c.bench_function("parse_chord/mixed_tokens", |b| {
        b.iter(|| {
            for t in TOKENS {
                let _ = black_box(parse_chord(black_box(t)));
            }
        })
    });

    let doc = TabDocument {
        song_id: "s".into(),
        title: "t".into(),
        artist: "a".into(),
        rating: 1.0,
        body: tab_body(50),
    };
    let mut group = c.benchmark_group("parse_tab");
    group.throughput(Throughput::Bytes(doc.body.len() as u64));
    group.bench_function("50_verses", |b| b.iter(|| parse_tab(black_box(&doc))));
    group.finish();
}

fn bench_stats(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sample = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.random_range(0..20) as f64).collect() };
    let (a8, b8) = (sample(8), sample(8));
    let (a_big, b_big) = (sample(5_000), sample(5_000));
    c.bench_function("mann_whitney/exact_8x8_ties", |b| {
        b.iter(|| mann_whitney_one_tailed(black_box(&a8), black_box(&b8), Alternative::AGreater))
    });
    c.bench_function("mann_whitney/normal_5000x5000", |b| {
        b.iter(|| mann_whitney_one_tailed(black_box(&a_big), black_box(&b_big), Alternative::AGreater))
    });
}

fn bench_wordshift(c: &mut Criterion) {
    let lex = Lexicon::bundled(NeutralBand::default());
    let words: Vec<&str> = [
        "love", "happy", "sad", "cry", "hell", "praise", "dead", "sun", "war", "kiss",
    ]
    .to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bag = || -> Bag { (0..2_000).map(|_| words[rng.random_range(0..words.len())]).collect() };
    let (comparison, reference) = (bag(), bag());
    c.bench_function("word_shift/10_words", |b| {
        b.iter(|| word_shift(&comparison, &reference, &lex))
    });
}

fn bench_modeling(c: &mut Criterion) {
    let data = chords(2_000, 3);
    let all = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
    let filter = LevelFilter {
        genres: all(&["Rock", "Punk", "Folk", "Pop"]),
        eras: all(&["1960's", "1970's", "1980's"]),
        regions: all(&[]),
        categories: ChordCategory::ANALYZED.iter().map(|c| c.name().to_string()).collect(),
    };
    let mut group = c.benchmark_group("greedy_aic");
    group.sample_size(20);
    group.bench_function("2000_rows_3_factors", |b| {
        b.iter_batched(
            || data.clone(),
            |d| greedy_aic(&d, &[Factor::Category, Factor::Genre, Factor::Era], &filter),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_parsing, bench_stats, bench_wordshift, bench_modeling);
criterion_main!(benches);
