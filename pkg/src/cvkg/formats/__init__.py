from .attributes import load_attributes
from .classification import parse_classification
from .coco import parse_coco
from .kitti import parse_kitti
from .voc import parse_voc

__all__ = ["load_attributes", "parse_classification", "parse_coco", "parse_kitti", "parse_voc"]
