"""Wavelet-coefficient toolkit: matrix-form CDF 9/7 transforms, the
irreversible codec path around them, coefficient-domain augmentation, and
subband tensor packing for CNN consumption."""

from .wavelet import (
    ALPHA, BETA, GAMMA, DELTA, K_SCALE,
    LiftingParams, DEFAULT_PARAMS, LiftingFactors, TransformPair,
    CoeffPlane, CoeffPyramid,
    build_transform_pair, dwt1d_lifting_reference, dwt2d, dwt2d_batch,
    dwt2d_lifting_reference, idwt2d, dwt_multilevel, idwt_partial,
    idwt_multilevel, split_subbands, merge_subbands, pyramid_to_plane,
    plane_to_pyramid, analysis_filters,
)
from .codec import (
    RgbImage, YcbcrPlanes, QuantizedPlane, CodecCommands, CodecUnavailableError,
    forward_precoding, inverse_precoding, step_size_for_ratio,
    deadzone_quantize, dequantize, quantize_values, dequantize_values,
    compress_planes, decode_tail, psnr, external_codec_roundtrip,
    ICT_FORWARD, ICT_INVERSE, LEVEL_OFFSET, DEQUANT_BIAS,
)
from .ppm import PpmFormatError, read_ppm, write_ppm
from .augment import (
    AugOperator, AugPolicy, OperatorCache,
    spatial_operator, flip_matrix, shift_matrix, conjugate, make_operator,
    apply_augmentation, apply_spatial, naive_subband_flip, sample_policy,
)
from .packing import (
    PackedTensor, WctFile, WctFormatError, CHANNEL_ORDER, SUBBAND_ORDER,
    pack_subbands, unpack_subbands, write_wct, read_wct,
    write_labels, read_labels, label_path,
)
from .bench import BenchReport, MIN_ITERATIONS, bench_recon_gain, bench_batch_dwt

__version__ = "0.1.0"
