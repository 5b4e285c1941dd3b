//! Encode/decode identity and decoder error paths for the binary containers
//! and the beacon CSV.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use roomflock_core::dynamics::simulate;
use roomflock_core::env::place_beacons;
use roomflock_core::inference::{build_reference_table, SimSetup};
use roomflock_core::io::{
    read_beacons_csv, read_table, read_trajectory, write_beacons_csv, write_table,
    write_trajectory, FileError,
};
use roomflock_core::params::{FixedParams, GlobalParams, SimConfig};
use roomflock_core::prior::PriorSpec;
use roomflock_core::{Beacons, Room, Trajectory};

fn sample_trajectory(seed: u64) -> Trajectory {
    let room = Room::default();
    let beacons = place_beacons(&room, 5, &mut ChaCha8Rng::seed_from_u64(44)).unwrap();
    let config = SimConfig {
        num_agents: 7,
        num_beacons: 5,
        num_steps: 23,
        dt: 0.1,
        seed,
        reassign_beacons: false,
    };
    simulate(
        &GlobalParams::new(0.4, 1.1, 0.6, 0.25),
        &FixedParams::default(),
        &room,
        &beacons,
        &config,
    )
    .unwrap()
}

#[test]
fn trajectory_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.swrm");
    let traj = sample_trajectory(11);
    write_trajectory(&path, &traj).unwrap();
    let back = read_trajectory(&path).unwrap();
    assert_eq!(traj, back);

    // Re-encoding the decoded value reproduces the bytes.
    let path2 = dir.path().join("run2.swrm");
    write_trajectory(&path2, &back).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&path2).unwrap()
    );
}

#[test]
fn trajectory_decoder_rejects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.swrm");
    write_trajectory(&path, &sample_trajectory(3)).unwrap();
    let bytes = std::fs::read(&path).unwrap();

    // Truncation carries a byte offset.
    let cut = dir.path().join("cut.swrm");
    std::fs::write(&cut, &bytes[..bytes.len() - 5]).unwrap();
    match read_trajectory(&cut) {
        Err(FileError::Truncated { offset, .. }) => assert!(offset > 0),
        other => panic!("expected truncation error, got {other:?}"),
    }

    // Wrong magic.
    let mut wrong = bytes.clone();
    wrong[0] = b'X';
    let bad = dir.path().join("bad.swrm");
    std::fs::write(&bad, &wrong).unwrap();
    assert!(matches!(
        read_trajectory(&bad),
        Err(FileError::BadMagic { .. })
    ));

    // Unknown version.
    let mut versioned = bytes.clone();
    versioned[4] = 99;
    let v = dir.path().join("v99.swrm");
    std::fs::write(&v, &versioned).unwrap();
    assert!(matches!(read_trajectory(&v), Err(FileError::BadVersion(99))));

    // Trailing garbage.
    let mut extra = bytes;
    extra.push(7);
    let t = dir.path().join("extra.swrm");
    std::fs::write(&t, &extra).unwrap();
    assert!(matches!(
        read_trajectory(&t),
        Err(FileError::TrailingData { .. })
    ));
}

#[test]
fn table_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ref.swtb");
    let room = Room::default();
    let beacons = place_beacons(&room, 8, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let setup = SimSetup {
        fixed: FixedParams::default(),
        room,
        beacons,
        config: SimConfig {
            num_agents: 6,
            num_beacons: 8,
            num_steps: 15,
            dt: 0.1,
            seed: 0,
            reassign_beacons: false,
        },
    };
    let table = build_reference_table(&PriorSpec::default(), &setup, 20, 123, None).unwrap();
    write_table(&path, &table).unwrap();
    let back = read_table(&path).unwrap();
    assert_eq!(table, back);

    let truncated = dir.path().join("cut.swtb");
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&truncated, &bytes[..bytes.len() / 2]).unwrap();
    assert!(matches!(
        read_table(&truncated),
        Err(FileError::Truncated { .. })
    ));
}

#[test]
fn beacons_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("beacons.csv");
    let room = Room::default();
    let beacons: Beacons = place_beacons(&room, 8, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    write_beacons_csv(&path, &beacons).unwrap();
    let back = read_beacons_csv(&path).unwrap();
    assert_eq!(beacons, back);

    std::fs::write(&path, "index,x,y\n0,1.0\n").unwrap();
    match read_beacons_csv(&path) {
        Err(FileError::Csv { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected CSV error, got {other:?}"),
    }
}
