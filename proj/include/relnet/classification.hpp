#pragma once

namespace relnet {

/// A rounded class label together with the score it was rounded from.
struct Classification {
    int label = 0;
    double raw = 0.0;
};

}  // namespace relnet
