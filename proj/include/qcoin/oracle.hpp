#pragma once

// Oracle handles: they hide the configuration behind a counted interface.
// Engines that apply one coherent oracle across a whole superposition charge
// the ledger once per logical application.

#include "qcoin/coins.hpp"

#include <utility>

namespace qcoin {

struct query_ledger {
    long balance = 0;
    long quasi = 0;
};

class b_oracle {
  public:
    b_oracle(coin_config x, query_ledger& led) : x_(std::move(x)), led_(&led) {}

    int query(const balance_query& q) {
        ++led_->balance;
        return chi(x_, q);
    }

    void charge(long calls = 1) { led_->balance += calls; }

    // engines receive the configuration for state arithmetic; every read must
    // be paired with an explicit charge
    const coin_config& config_for_simulation() const { return x_; }

    const query_ledger& ledger() const { return *led_; }

  private:
    coin_config x_;
    query_ledger* led_;
};

class q_oracle {
  public:
    q_oracle(coin_config x, query_ledger& led) : x_(std::move(x)), led_(&led) {}

    void charge(long calls = 1) { led_->quasi += calls; }

    double prob_balanced(const coin_config& mask) const {
        return quasi_prob_balanced(x_, mask);
    }

    const coin_config& config_for_simulation() const { return x_; }

    const query_ledger& ledger() const { return *led_; }

  private:
    coin_config x_;
    query_ledger* led_;
};

} // namespace qcoin
