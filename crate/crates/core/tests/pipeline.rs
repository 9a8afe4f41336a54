use chaoscause::chaosfex::GlsNeuron;
use chaoscause::classify::{self, predict};
use chaoscause::config::{preset, Preset, Scale};
use chaoscause::data::Label;
use chaoscause::pipeline::dataset::build_dataset;
use chaoscause::pipeline::experiment::{
    featurize, generate_data, run_experiment, stratified_split, Counts, ExperimentConfig,
};
use chaoscause::pipeline::features::{spectrum_matrix, Scaling};
use chaoscause::pipeline::recipe::DatasetRecipe;
use chaoscause::spectral::{amplitude_spectrum, fit_scaler, scale_per_instance};

fn small(kind: Preset) -> ExperimentConfig {
    let mut c = preset(kind, Scale::Desk, 21);
    c.counts = Counts { train_per_class: 30, test_per_class: 10, length: 300, burn_in: 0 };
    c
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let config = small(Preset::Table3);
    let with = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| run_experiment(&config).unwrap())
    };
    let (one, four) = (with(1), with(4));
    assert_eq!(one.data, four.data);
    assert_eq!(one.model, four.model);
    assert_eq!(one.report, four.report);
}

#[test]
fn seed_changes_the_data() {
    let a = generate_data(&small(Preset::Table1Lr)).unwrap();
    let mut c = small(Preset::Table1Lr);
    c.master_seed += 1;
    let b = generate_data(&c).unwrap();
    assert_ne!(a.train.series[0].values, b.train.series[0].values);
}

#[test]
fn split_is_stratified_and_held_out_rows_are_unseen() {
    let config = small(Preset::Table2Lr);
    let data = generate_data(&config).unwrap();
    let labels = data.train.labels();
    let (train, held) = stratified_split(&labels, config.split_fraction, config.master_seed);
    for class in [Label::Causal, Label::NonCausal] {
        assert_eq!(train.iter().filter(|&&i| labels[i] == class).count(), 21);
        assert_eq!(held.iter().filter(|&&i| labels[i] == class).count(), 9);
    }
    let sets = featurize(&config, &data).unwrap();
    assert_eq!(sets.sets[0].matrix.n_rows(), 42);
    assert_eq!(sets.sets[1].matrix.n_rows(), 18);
    let held_spectra: Vec<Vec<f64>> =
        held.iter().map(|&i| amplitude_spectrum(&data.train.series[i].values).unwrap().amplitudes).collect();
    for row in sets.train().rows() {
        assert!(held_spectra.iter().all(|h| h.as_slice() != row));
    }
}

#[test]
fn per_feature_scaler_sees_only_the_training_split() {
    let mut config = small(Preset::Table3);
    config.features.scaling = Scaling::PerFeature;
    let mut data = generate_data(&config).unwrap();
    let sets = featurize(&config, &data).unwrap();
    let scaler = sets.featurizer.scaler.clone().unwrap();

    let (train, held) = stratified_split(&data.train.labels(), config.split_fraction, config.master_seed);
    let train_spectra = spectrum_matrix(&data.train.raw_matrix().select_rows(&train), &config.features).unwrap();
    assert_eq!(scaler, fit_scaler(&train_spectra, config.features.headroom).unwrap());

    for &i in &held {
        for v in data.train.series[i].values.iter_mut() {
            *v *= 50.0;
        }
    }
    for t in &mut data.tests {
        for s in &mut t.series {
            s.values.reverse();
        }
    }
    assert_eq!(featurize(&config, &data).unwrap().featurizer, sets.featurizer);
}

#[test]
fn stages_compose_by_hand_on_five_series() {
    let config = small(Preset::Table3);
    let run = run_experiment(&config).unwrap();
    let ds = build_dataset(&DatasetRecipe::arma(), 5, config.counts.length, 0, 99).unwrap();

    let neuron = GlsNeuron::new(config.gls).unwrap();
    let raw = ds.raw_matrix();
    let spectra = spectrum_matrix(&raw, &config.features).unwrap();
    let scaled = scale_per_instance(&spectra, config.features.headroom).unwrap();
    let manual_rows: Vec<Vec<f64>> = scaled
        .rows()
        .map(|row| row.iter().map(|&y| neuron.fire(y).unwrap().ttss).collect())
        .collect();
    let piped = run.features.featurizer.transform(&raw).unwrap();
    for (i, row) in manual_rows.iter().enumerate() {
        assert_eq!(row.as_slice(), piped.row(i));
    }
    let pred = predict(&run.model, &piped).unwrap();
    for (i, row) in manual_rows.iter().enumerate() {
        let z = run.model.decision(row);
        assert_eq!(pred.labels[i], if z >= 0.0 { Label::Causal } else { Label::NonCausal });
    }
    let report = classify::evaluate(&pred.labels, piped.labels()).unwrap();
    assert!(report.class0.is_none());
}
