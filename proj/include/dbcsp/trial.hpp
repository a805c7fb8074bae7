#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "dbcsp/errors.hpp"

namespace dbcsp {

/// One unit's recording: c signals (rows) observed over T time points
/// (columns). Entries must be finite and c >= 2.
class Trial {
public:
    explicit Trial(Eigen::MatrixXd data) : data_(std::move(data)) {
        if (data_.rows() < 2) {
            throw ArgumentError("trial needs at least 2 signal rows, got " +
                                std::to_string(data_.rows()));
        }
        if (data_.cols() < 1) {
            throw ArgumentError("trial needs at least 1 time sample");
        }
        if (!data_.allFinite()) {
            throw ArgumentError("trial contains non-finite entries");
        }
    }

    Eigen::Index channels() const { return data_.rows(); }
    Eigen::Index samples() const { return data_.cols(); }
    const Eigen::MatrixXd& data() const { return data_; }

private:
    Eigen::MatrixXd data_;
};

/// Two named classes of trials sharing a channel count. Each class needs
/// at least two trials; labels must be distinct and non-empty.
class LabeledDataset {
public:
    LabeledDataset(std::string label1, std::string label2,
                   std::vector<Trial> class1, std::vector<Trial> class2)
        : label1_(std::move(label1)),
          label2_(std::move(label2)),
          class1_(std::move(class1)),
          class2_(std::move(class2)) {
        if (label1_.empty() || label2_.empty()) {
            throw ArgumentError("class labels must be non-empty");
        }
        if (label1_ == label2_) {
            throw ArgumentError("class labels must be distinct, both are \"" + label1_ + "\"");
        }
        if (class1_.size() < 2 || class2_.size() < 2) {
            throw ArgumentError("each class needs at least 2 trials (got " +
                                std::to_string(class1_.size()) + " and " +
                                std::to_string(class2_.size()) + ")");
        }
        const Eigen::Index c = class1_.front().channels();
        for (const auto* cls : {&class1_, &class2_}) {
            for (const Trial& t : *cls) {
                if (t.channels() != c) {
                    throw ArgumentError("trials disagree on channel count: " +
                                        std::to_string(c) + " vs " +
                                        std::to_string(t.channels()));
                }
            }
        }
    }

    const std::string& label1() const { return label1_; }
    const std::string& label2() const { return label2_; }
    const std::vector<Trial>& class1() const { return class1_; }
    const std::vector<Trial>& class2() const { return class2_; }
    Eigen::Index channels() const { return class1_.front().channels(); }
    std::size_t size() const { return class1_.size() + class2_.size(); }

private:
    std::string label1_;
    std::string label2_;
    std::vector<Trial> class1_;
    std::vector<Trial> class2_;
};

} // namespace dbcsp
