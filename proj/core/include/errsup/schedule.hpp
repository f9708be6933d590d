#ifndef ERRSUP_SCHEDULE_HPP
#define ERRSUP_SCHEDULE_HPP

#include <string>

namespace errsup {

// Linear warmup from lr_ini to lr_max over n_warmup steps, then cosine decay
// to zero over n_warmup * n_cycle_mult further steps.
struct WarmupCosineSchedule {
  double lr_ini = 5e-6;
  double lr_max = 5e-4;
  int n_warmup = 4000;
  int n_cycle_mult = 24;

  double lr_at(long step) const;
};

// Halve-on-worse schedule: the learning rate halves whenever the observed
// dev score is worse than the best seen, and training stops after the fifth
// halving. Ties are not worse.
class PlateauHalver {
 public:
  PlateauHalver(double initial_lr, bool higher_is_better, int max_halvings = 5)
      : lr_(initial_lr), higher_is_better_(higher_is_better), max_halvings_(max_halvings) {}

  struct Observation {
    double lr;
    bool halved;
    bool stop;
    bool improved;
  };

  Observation observe(double dev_score);

  double lr() const { return lr_; }
  int halvings() const { return halvings_; }
  bool has_best() const { return has_best_; }
  double best() const { return best_; }

  std::string to_json() const;
  static PlateauHalver from_json(const std::string& text);

 private:
  double lr_;
  bool higher_is_better_;
  int max_halvings_;
  int halvings_ = 0;
  bool has_best_ = false;
  double best_ = 0.0;
};

}  // namespace errsup

#endif
