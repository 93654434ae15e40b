//! Software point-splat renderer with sky-box backgrounds and shader
//! presets, plus the crop/resize used to bring real photos to network
//! resolution.

mod image;
mod resize;
mod shader;
mod skybox;
mod splat;

pub use self::image::Image;
pub use resize::center_crop_resize;
pub use shader::{apply_shader, apply_shader_in_place, ShaderPreset};
pub use skybox::{fill_skybox, sky_color, SkyColors, SkyboxPreset};
pub use splat::{pixel_of, splat_render, RenderOptions};
