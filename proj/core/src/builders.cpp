#include "sparsewarn/errors.hpp"
#include "sparsewarn/network.hpp"

namespace sparsewarn {

namespace {

void glorot_all(Network& net, std::uint64_t init_seed) {
  for (int i = 0; i < net.num_layers(); ++i) {
    Rng rng(mix_seed(init_seed, 0x1a7e5ULL + static_cast<std::uint64_t>(i)));
    net.layer(i).init_params(rng);
  }
}

}  // namespace

Network build_csen1(const PlaneLayout& plane, std::uint64_t init_seed) {
  Network net(plane.height, plane.width, 1);
  net.set_plane(plane);
  net.add(std::make_unique<Conv2dLayer>(3, 3, 1, 48));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(3, 3, 48, 24));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(3, 3, 24, 1));
  net.add(std::make_unique<ClassAvgPoolLayer>(plane));
  net.add(std::make_unique<SoftmaxLayer>());
  glorot_all(net, init_seed);
  return net;
}

Network build_csen2(const PlaneLayout& plane, bool pad_odd, std::uint64_t init_seed) {
  if (!pad_odd && (plane.height % 2 != 0 || plane.width % 2 != 0))
    throw NumericError("build_csen2: plane " + std::to_string(plane.height) + "x" +
                       std::to_string(plane.width) +
                       " not divisible by 2; enable the zero-padded layout");
  Network net(plane.height, plane.width, 1);
  net.set_plane(plane);
  net.add(std::make_unique<Conv2dLayer>(3, 3, 1, 48));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<MaxPoolLayer>(pad_odd));
  net.add(std::make_unique<Conv2dLayer>(3, 3, 48, 24));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<TransposedConv2dLayer>(3, 3, 24, 24, plane.height, plane.width));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(3, 3, 24, 1));
  net.add(std::make_unique<ClassAvgPoolLayer>(plane));
  net.add(std::make_unique<SoftmaxLayer>());
  glorot_all(net, init_seed);
  return net;
}

Network build_reconnet_se(const PlaneLayout& plane, std::uint64_t init_seed) {
  Network net(plane.height, plane.width, 1);
  net.set_plane(plane);
  net.add(std::make_unique<Conv2dLayer>(11, 11, 1, 64));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(1, 1, 64, 32));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(7, 7, 32, 1));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(11, 11, 1, 64));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(1, 1, 64, 32));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<Conv2dLayer>(7, 7, 32, 1));
  net.add(std::make_unique<ClassAvgPoolLayer>(plane));
  net.add(std::make_unique<SoftmaxLayer>());
  glorot_all(net, init_seed);
  return net;
}

Network build_mlp(const Projector& projector, const std::vector<int>& hidden, int num_classes,
                  std::uint64_t init_seed) {
  if (hidden.size() != 3)
    throw ConfigError("build_mlp: expected three hidden widths");
  if (hidden[0] != projector.out_dim())
    throw NumericError("build_mlp: first hidden width " + std::to_string(hidden[0]) +
                       " must equal the projector output dimension " +
                       std::to_string(projector.out_dim()));

  Network net(projector.in_dim(), 1, 1);
  auto first = std::make_unique<DenseLayer>(projector.in_dim(), hidden[0]);
  DenseLayer* first_ptr = first.get();
  net.add(std::move(first));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<DenseLayer>(hidden[0], hidden[1]));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<DenseLayer>(hidden[1], hidden[2]));
  net.add(std::make_unique<ReluLayer>());
  net.add(std::make_unique<DenseLayer>(hidden[2], num_classes));
  net.add(std::make_unique<SoftmaxLayer>());
  glorot_all(net, init_seed);
  first_ptr->set_weights(projector.basis);
  return net;
}

}  // namespace sparsewarn
