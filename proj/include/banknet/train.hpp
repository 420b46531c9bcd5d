#ifndef BANKNET_TRAIN_HPP
#define BANKNET_TRAIN_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "banknet/augment.hpp"
#include "banknet/dataset.hpp"
#include "banknet/errors.hpp"
#include "banknet/model.hpp"
#include "banknet/rng.hpp"
#include "banknet/tensor.hpp"

namespace banknet {

struct TrainConfig {
    double learning_rate = 0.1;
    int batch_size = 100;
    int epochs = 400;
    std::uint64_t seed = 0;
    double augment_threshold = 0.1;
};

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

using History = std::vector<EpochStats>;
using EpochCallback = std::function<void(const EpochStats&)>;

namespace detail {

template <class T>
Tensor<T> image_to_input(const Image& img) {
    Tensor<T> out = Tensor<T>::zeros({1, static_cast<std::size_t>(img.height),
                                      static_cast<std::size_t>(img.width), 3});
    T* p = out.data();
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        p[i] = static_cast<T>(img.pixels[i]) / T(255);
    }
    return out;
}

template <class T>
Tensor<T> assemble_batch(const std::vector<const Image*>& images) {
    const auto h = static_cast<std::size_t>(images.front()->height);
    const auto w = static_cast<std::size_t>(images.front()->width);
    Tensor<T> out = Tensor<T>::zeros({images.size(), h, w, 3});
    T* p = out.data();
    for (const Image* img : images) {
        if (static_cast<std::size_t>(img->height) != h || static_cast<std::size_t>(img->width) != w) {
            throw ShapeError("batch assembly: images differ in size");
        }
        for (std::size_t i = 0; i < img->pixels.size(); ++i, ++p) {
            *p = static_cast<T>(img->pixels[i]) / T(255);
        }
    }
    return out;
}

template <class T>
std::size_t correct_count(const std::vector<int>& labels, const Tensor<T>& probs) {
    const std::size_t k = probs.extent(1);
    std::size_t correct = 0;
    const T* p = probs.data();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j) {
            if (p[i * k + j] > p[i * k + best]) best = j;
        }
        if (static_cast<int>(best) == labels[i]) ++correct;
    }
    return correct;
}

} // namespace detail

// Infer-mode loss and accuracy over a dataset, batched.
template <class T>
std::pair<double, double> evaluate(Network<T>& net, const Dataset& ds, int batch_size) {
    if (ds.items.empty()) throw ValueError("evaluate: empty dataset");
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < ds.items.size(); start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(ds.items.size(), start + static_cast<std::size_t>(batch_size));
        std::vector<const Image*> images;
        std::vector<int> labels;
        for (std::size_t i = start; i < end; ++i) {
            images.push_back(&ds.items[i].image);
            labels.push_back(ds.items[i].label);
        }
        Tensor<T> batch = detail::assemble_batch<T>(images);
        Tensor<T> probs = net.forward(batch, Mode::Infer);
        LossResult<T> loss = cross_entropy_loss(probs, labels);
        loss_sum += static_cast<double>(loss.loss) * static_cast<double>(labels.size());
        correct += detail::correct_count(labels, probs);
    }
    const auto n = static_cast<double>(ds.items.size());
    return {loss_sum / n, static_cast<double>(correct) / n};
}

// SGD over shuffled epochs. Augmentation happens at batch assembly on the
// train split only, with one stream per (epoch, dataset index). The final
// partial batch is kept. Validation never influences the weights.
template <class T>
History fit(Network<T>& net, const Dataset& train_set, const Dataset& val_set, const TrainConfig& cfg,
            const EpochCallback& on_epoch = {}) {
    if (train_set.items.empty() || val_set.items.empty()) {
        throw ConfigError("fit: train and validation sets must be non-empty");
    }
    if (cfg.learning_rate <= 0.0) throw ConfigError("fit: learning_rate must be positive");
    if (cfg.batch_size < 1 ||
        static_cast<std::size_t>(cfg.batch_size) > train_set.items.size()) {
        throw ConfigError("fit: batch_size must be in [1, train size]");
    }
    if (cfg.epochs < 0) throw ConfigError("fit: negative epoch count");
    if (cfg.augment_threshold < 0.0 || cfg.augment_threshold > 1.0) {
        throw ConfigError("fit: augment_threshold must be in [0,1]");
    }

    AugmentConfig aug;
    aug.threshold = cfg.augment_threshold;

    History history;
    std::vector<std::size_t> order(train_set.items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto e = static_cast<std::uint64_t>(epoch);
        Rng shuffle_rng = make_rng(cfg.seed, {stream::kShuffle, e});
        banknet::shuffle(order, shuffle_rng);
        Rng dropout_rng = make_rng(cfg.seed, {stream::kDropout, e});

        double loss_sum = 0.0;
        std::size_t correct = 0;
        std::size_t step = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size), ++step) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<Image> augmented;
            std::vector<const Image*> images;
            std::vector<int> labels;
            augmented.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t idx = order[i];
                Rng arng = make_rng(cfg.seed, {stream::kAugment, e, static_cast<std::uint64_t>(idx)});
                augmented.push_back(apply_random(train_set.items[idx].image, aug, arng).image);
                labels.push_back(train_set.items[idx].label);
            }
            for (const Image& img : augmented) images.push_back(&img);
            Tensor<T> batch = detail::assemble_batch<T>(images);
            Tensor<T> probs;
            const T loss = net.train_step(batch, labels, static_cast<T>(cfg.learning_rate), dropout_rng,
                                          static_cast<std::size_t>(epoch), step, &probs);
            loss_sum += static_cast<double>(loss) * static_cast<double>(labels.size());
            correct += detail::correct_count(labels, probs);
        }

        EpochStats stats;
        stats.epoch = static_cast<std::size_t>(epoch);
        stats.train_loss = loss_sum / static_cast<double>(order.size());
        stats.train_acc = static_cast<double>(correct) / static_cast<double>(order.size());
        const auto [vl, va] = evaluate(net, val_set, cfg.batch_size);
        stats.val_loss = vl;
        stats.val_acc = va;
        history.push_back(stats);
        if (on_epoch) on_epoch(stats);
    }
    return history;
}

} // namespace banknet

#endif
